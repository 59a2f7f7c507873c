pub mod error;
pub mod exactlat;
pub mod polycone;
pub mod series;
pub mod monoid;
pub mod ehrhart;
pub mod criteria;
pub mod io;
pub mod oracle;
pub mod fixtures;

pub use error::{Error, Result};
