use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("frame of discernment must contain at least one hypothesis")]
    EmptyFrame,
    #[error("hypothesis labels must be non-empty")]
    EmptyLabel,
    #[error("label `{0}` is reserved or contains `|`")]
    ReservedLabel(String),
    #[error("duplicate hypothesis label `{0}`")]
    DuplicateLabel(String),
    #[error("frame holds {0} hypotheses, at most 64 are supported")]
    FrameTooLarge(usize),
    #[error("subset mask {0:#x} has bits outside the frame")]
    InvalidSubset(u64),
    #[error("unknown hypothesis label `{0}`")]
    UnknownLabel(String),
    #[error("mass {0} is outside [0, 1]")]
    MassOutOfRange(f64),
    #[error("masses sum to {0}, expected 1")]
    SumNotOne(f64),
    #[error("normalized mass function cannot put mass on the empty set")]
    EmptySetMass,
    #[error("categorical mass function needs a non-empty subset")]
    EmptySubset,
    #[error("mass functions are defined on different frames")]
    FrameMismatch,
    #[error("total conflict between sources, Dempster normalization undefined")]
    TotalConflict,
    #[error("nothing to combine")]
    EmptyInput,
    #[error("pignistic probability is only defined on singletons")]
    NotSingleton,
    #[error("no candidate hypothesis satisfies the cardinality bounds")]
    EmptyCandidateSet,
    #[error("candidate set of {0} subsets exceeds the enumeration limit")]
    TooManyCandidates(u128),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("similarity score {0} is outside (0, 1]")]
    ScoreOutOfRange(f64),
    #[error("entity catalog `{0}` is empty")]
    EmptyCatalog(String),
    #[error("duplicate entity `{0}` in catalog")]
    DuplicateEntity(String),
    #[error("entity `{0}` is not in its catalog")]
    UnknownEntity(String),
    #[error("no evidence for source entity `{0}`")]
    NoEvidence(String),
}
