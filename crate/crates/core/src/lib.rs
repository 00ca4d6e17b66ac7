//! High utility-occupancy sequential pattern mining.
//!
//! A [`QSequenceDatabase`] holds quantitative sequences; [`mine`] enumerates
//! every pattern whose support and average utility occupancy reach the given
//! [`Thresholds`]. The [`oracle`] module is a slow exhaustive reference.

pub mod chain;
pub mod datagen;
mod error;
pub mod io;
pub mod miner;
pub mod model;
pub mod occupancy;
pub mod oracle;
mod topk;

pub use error::{Error, Result};
pub use miner::{
    mine, HuospEntry, MinerConfig, MiningStats, ResultSet, Strategy, StrategySet, Variant,
};
pub use model::{
    ExtensionKind, ExternalUtilityTable, Item, ItemId, LookupMode, Pattern, QItem, QItemset,
    QSequence, QSequenceDatabase,
};
pub use occupancy::Thresholds;
pub use topk::TopK;
