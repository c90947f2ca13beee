//! Heading autopilot: the second-order steering plant, pole/stability
//! analysis, unity-feedback PID loop closure, root-locus sampling, step
//! responses, and the discrete heading controller used by the mission
//! simulator.

mod pid;
mod tf;

pub use pid::{HeadingPid, PidGains};
pub use tf::{
    closed_loop, is_stable, nomoto_paper, pid_controller_tf, poles, root_locus, series,
    step_response, StepResponse, StepSummary, TfError, TransferFunction,
};
