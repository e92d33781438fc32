//! Per-document validation.
//!
//! Every validator is total: problems become findings in the returned
//! [`Report`], never errors. Presence findings come from the pattern tables
//! in [`presence`]; the rest are semantic checks listed in [`catalog`].

pub mod catalog;
mod common;
mod context;
mod event;
mod match_sheet;
mod meta;
pub mod presence;
mod tracking;

pub use context::{FrameOrderState, MetaContext, BOUNDS_MARGIN};
pub use event::{validate_event, validate_event_with};
pub use match_sheet::validate_match_sheet;
pub use meta::{validate_meta, validate_video_meta};
pub use tracking::{validate_skeleton_frame, validate_skeleton_frame_with, validate_tracking_frame, validate_tracking_frame_with};

pub(crate) use common::score_pair;
pub(crate) use event::check_event_into;
pub(crate) use tracking::{check_skeleton_into, check_tracking_into};
