pub mod cayley;
pub mod cocycle;
pub mod error;
pub mod families;
pub mod group;
pub mod io;
pub mod rigidity;
pub mod shift;

pub use cayley::{Ball, CayleyExplorer, EndsReport, ExplorerConfig, IntersectionCheck, Path};
pub use cocycle::{
    make_hom_cocycle, make_twisted, CocycleReport, Exhaustive, IdentityWitness, LocalCocycle,
    LocalTransfer, Rule, SweepOptions,
};
pub use error::{Error, Result};
pub use group::{Cyclic, Element, Free, GroupOracle, Lattice, Product, SharedGroup, Symmetric};
pub use io::{
    load_cocycle, load_result, parse_group, save_cocycle, save_result, CocycleDocument,
    ResultDocument,
};
pub use rigidity::{
    CohomologyReport, NValue, ObstructionDetails, ObstructionKind, ObstructionWitness, PhiTable,
    Rigidifier, RigidityOptions, RigidityResult, TransferTable,
};
pub use shift::{
    enumerate_patterns, Alphabet, Configuration, Dense, Pattern, PatternSpace, Symbol,
};
