//! Inputs shared by the benchmarks.

use voxnav_core::dialogue::{DialogueConfig, DialogueSession};
use voxnav_core::harness::fixtures::bundles;
use voxnav_core::harness::SimDevice;
use voxnav_core::lang::Lexicon;

pub fn device() -> SimDevice {
    SimDevice::with_bundles(bundles().into_iter().map(|(_, b)| b)).expect("fixture bundles install")
}

pub fn session() -> DialogueSession<SimDevice> {
    DialogueSession::new(device(), Lexicon::default(), DialogueConfig::default())
}
