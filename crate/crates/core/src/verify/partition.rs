use crate::error::{Result, ZnError};
use crate::zn::ResidueSet;

/// Splits a unit set into halves `A1`, `A2` with `|A1| = ⌈|A|/2⌉`, neither
/// containing a residue together with its negative.
///
/// Each pair `{x, -x} ⊆ A` sends its smaller residue to `A1` and the larger
/// to `A2`. Unpaired residues, ascending, then top `A1` up to its target
/// size and the rest go to `A2`.
pub fn antisymmetric_partition(a: &ResidueSet) -> Result<(ResidueSet, ResidueSet)> {
    let m = a.modulus();
    if m.get() < 3 {
        return Err(ZnError::Precondition("partition needs n >= 3".into()));
    }
    if !a.is_unit_set() {
        return Err(ZnError::Precondition(format!("{} is not a set of units mod {}", a.literal(), m.get())));
    }
    let (mut a1, mut a2, mut unpaired) = (Vec::new(), Vec::new(), Vec::new());
    for &x in a.elements() {
        let neg = m.neg(x);
        if !a.contains(neg) {
            unpaired.push(x);
        } else if x < neg {
            a1.push(x);
        } else {
            a2.push(x);
        }
    }
    let target = a.len().div_ceil(2);
    for x in unpaired {
        if a1.len() < target {
            a1.push(x);
        } else {
            a2.push(x);
        }
    }
    a1.sort_unstable();
    a2.sort_unstable();
    let (a1, a2) = (ResidueSet::from_sorted_unchecked(m, a1), ResidueSet::from_sorted_unchecked(m, a2));
    assert!(a1.is_antisymmetric() && a2.is_antisymmetric() && a1.len() == target);
    Ok((a1, a2))
}
