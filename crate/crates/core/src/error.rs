use thiserror::Error;

/// Errors raised by set construction, arithmetic preconditions and campaigns.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZnError {
    #[error("modulus {0} is below the minimum of 2")]
    ModulusTooSmall(u64),
    #[error("modulus {0} exceeds the cap of 2^24")]
    ModulusTooLarge(u64),
    #[error("residue {residue} is out of range for modulus {n}")]
    ResidueOutOfRange { residue: u64, n: u32 },
    #[error("duplicate residue {0} in set literal")]
    DuplicateResidue(u32),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u32, u32),
    #[error("set must be nonempty")]
    EmptySet,
    #[error("k = {k} is out of range for a set of size {size}")]
    KOutOfRange { k: usize, size: usize },
    #[error("malformed set literal {0:?}")]
    MalformedLiteral(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("enumeration of {count} instances exceeds the budget of {limit}")]
    BudgetExceeded { count: u128, limit: u128 },
    #[error("rank range {start}..{end} is out of bounds for {total} combinations")]
    RankOutOfRange { start: u64, end: u64, total: u128 },
}

pub type Result<T> = std::result::Result<T, ZnError>;
