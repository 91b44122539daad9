//! Survey sessions over HTTP, persisted as JSON-lines event logs.

pub mod api;
pub mod cli;
pub mod display;
pub mod error;
pub mod events;
pub mod session;
pub mod simulate;
pub mod store;

pub use error::{Result, ServiceError};
pub use session::{Session, SessionReport};
pub use store::SessionStore;
