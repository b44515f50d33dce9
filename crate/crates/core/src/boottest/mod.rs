//! Frobenius-distance statistics, null-restricted pooled estimates and the
//! parametric bootstrap that calibrates them.

mod engine;
mod result;
mod stats;

pub(crate) use engine::{check_inputs, run_replicates};
pub use engine::{run_general_test, run_test, NullPair, MAX_RETRIES};
pub(crate) use result::bootstrap_p_value;
pub use result::{Method, TestKind, TestResult};
pub use stats::{
    feature_distance, pooled_equality, pooled_scaling, scaling_null_pair, t_frob, t_scale,
    ScalingNull,
};
