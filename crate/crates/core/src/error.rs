use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        /// Byte offset into the input.
        offset: usize,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("world {world} out of range (model has {worlds} worlds)")]
    WorldOutOfRange { world: usize, worlds: usize },

    #[error("unknown built-in kernel `{0}`")]
    UnknownBuiltin(String),

    #[error("variable `{0}` uses the reserved `__` prefix")]
    ReservedName(String),

    #[error("d8 value {0} is outside 0..=7")]
    D8OutOfRange(u8),

    #[error("torus {width}x{height}: width must be a positive multiple of 8 and height a positive multiple of 4")]
    TorusDimensions { width: usize, height: usize },

    #[error("precondition violated: {0}")]
    Precondition(Violation),

    #[error("cannot unfold at world {world}: {reason}")]
    Unfold { world: usize, reason: String },

    #[error("invalid kernel: {0}")]
    Kernel(String),
}

/// A failed structural precondition, naming the witnessing worlds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotReflexive {
        world: usize,
    },
    /// The world was required to be irreflexive.
    Reflexive {
        world: usize,
    },
    /// A kernel failed; the assignment maps x1.. to worlds.
    Kernel {
        name: String,
        assignment: Vec<usize>,
    },
    /// `a ~ b` and `b ~ c` but not `a ~ c`, or an asymmetric pair.
    NotEquivalence {
        a: usize,
        b: usize,
        c: usize,
    },
    /// A formula that must hold globally fails at this world.
    NotGlobal {
        formula: String,
        world: usize,
    },
    /// A reserved variable is already present in the model.
    ReservedVariable {
        name: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotReflexive { world } => write!(f, "world {world} is not reflexive"),
            Violation::Reflexive { world } => write!(f, "world {world} is reflexive"),
            Violation::Kernel { name, assignment } => {
                write!(f, "{name} fails at assignment (")?;
                for (i, w) in assignment.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "x{}={w}", i + 1)?;
                }
                f.write_str(")")
            }
            Violation::NotEquivalence { a, b, c } => {
                write!(f, "~ is not an equivalence on worlds {a}, {b}, {c}")
            }
            Violation::NotGlobal { formula, world } => {
                write!(f, "{formula} does not hold at world {world}")
            }
            Violation::ReservedVariable { name } => {
                write!(f, "model already uses reserved variable {name}")
            }
        }
    }
}
