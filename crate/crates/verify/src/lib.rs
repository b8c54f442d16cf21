// SPDX-License-Identifier: Apache-2.0

//! Input documents, verification reports and the command implementations
//! behind the `twistlat` binary.

pub mod commands;
pub mod doc;
pub mod example43;
pub mod report;

pub use doc::{parse_spec, DocError, SpecDocument};
pub use report::{Check, Report, Verdict};
