//! Quivers, tracked mutation and highest l-weight bookkeeping for HL-type modules
//! over quantum affine sl_{n+1}.

pub mod appendix;
pub mod error;
pub mod gridseeds;
pub mod heights;
pub mod hl;
pub mod oracle;
pub mod quiver;
pub mod sequences;
pub mod serve;
pub mod verify;
pub mod ymon;

pub use error::{Error, Result};
