//! Library side of the `forge` command line tool: the presentation file
//! format, deterministic report documents, and the acceptance suite shared
//! between `forge verify` and the integration tests.

pub mod acceptance;
pub mod format;
pub mod report;
