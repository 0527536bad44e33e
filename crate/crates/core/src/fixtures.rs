//! Reference systems with published reference values.
//!
//! The seven-agent system has two final classes `{1,2,3}` and `{4,5}` and a
//! nonbasic class `{6,7}`; the five-agent system is its restriction to the
//! basic agents. Arrays named `*_ROUNDED` hold values rounded to three or four
//! decimals exactly as they were published; everything else is exact.

pub const SEVEN_AGENT_P: [[f64; 7]; 7] = [
    [0.7, 0.0, 0.3, 0.0, 0.0, 0.0, 0.0],
    [0.1, 0.9, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.4, 0.2, 0.4, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.7, 0.3, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.2, 0.8, 0.0, 0.0],
    [0.0, 0.1, 0.3, 0.0, 0.0, 0.3, 0.3],
    [0.0, 0.0, 0.0, 0.2, 0.0, 0.2, 0.6],
];

/// `L = I - P` for the seven-agent system.
pub const SEVEN_AGENT_L: [[f64; 7]; 7] = [
    [0.3, 0.0, -0.3, 0.0, 0.0, 0.0, 0.0],
    [-0.1, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0],
    [-0.4, -0.2, 0.6, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.3, -0.3, 0.0, 0.0],
    [0.0, 0.0, 0.0, -0.2, 0.2, 0.0, 0.0],
    [0.0, -0.1, -0.3, 0.0, 0.0, 0.7, -0.3],
    [0.0, 0.0, 0.0, -0.2, 0.0, -0.2, 0.4],
];

/// Basis of the consensus region: `1` followed by the columns of `L` with
/// columns 1 and 4 removed.
pub const SEVEN_AGENT_U: [[f64; 6]; 7] = [
    [1.0, 0.0, -0.3, 0.0, 0.0, 0.0],
    [1.0, 0.1, 0.0, 0.0, 0.0, 0.0],
    [1.0, -0.2, 0.6, 0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, -0.3, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.2, 0.0, 0.0],
    [1.0, -0.1, -0.3, 0.0, 0.7, -0.3],
    [1.0, 0.0, 0.0, 0.0, -0.2, 0.4],
];

/// Power limit as published: the first five rows are exact, the last two are
/// rounded to three decimals.
pub const SEVEN_AGENT_P_INF_ROUNDED: [[f64; 7]; 7] = [
    [0.4, 0.4, 0.2, 0.0, 0.0, 0.0, 0.0],
    [0.4, 0.4, 0.2, 0.0, 0.0, 0.0, 0.0],
    [0.4, 0.4, 0.2, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.4, 0.6, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.4, 0.6, 0.0, 0.0],
    [0.291, 0.291, 0.146, 0.109, 0.164, 0.0, 0.0],
    [0.146, 0.146, 0.073, 0.255, 0.382, 0.0, 0.0],
];

/// Orthogonal projector onto the consensus region, scaled by 22.
pub const SEVEN_AGENT_S_TIMES_22: [[f64; 7]; 7] = [
    [18.0, -4.0, -2.0, 4.0, 6.0, 0.0, 0.0],
    [-4.0, 18.0, -2.0, 4.0, 6.0, 0.0, 0.0],
    [-2.0, -2.0, 21.0, 2.0, 3.0, 0.0, 0.0],
    [4.0, 4.0, 2.0, 18.0, -6.0, 0.0, 0.0],
    [6.0, 6.0, 3.0, -6.0, 13.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 22.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 22.0],
];

/// Weight vector of the projection procedure, scaled by 110.
pub const SEVEN_AGENT_ALPHA_TIMES_110: [f64; 7] = [26.0, 26.0, 13.0, 18.0, 27.0, 0.0, 0.0];

/// The basic subsystem (agents 1..5 of the seven-agent system).
pub const FIVE_AGENT_P: [[f64; 5]; 5] = [
    [0.7, 0.0, 0.3, 0.0, 0.0],
    [0.1, 0.9, 0.0, 0.0, 0.0],
    [0.4, 0.2, 0.4, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.7, 0.3],
    [0.0, 0.0, 0.0, 0.2, 0.8],
];

pub const FIVE_AGENT_X: [[f64; 5]; 5] = [
    [1.0, 0.0, -0.3, 0.0, 0.0],
    [1.0, 0.1, 0.0, 0.0, 0.0],
    [1.0, -0.2, 0.6, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0, -0.3],
    [1.0, 0.0, 0.0, 0.0, 0.2],
];

pub const FIVE_AGENT_Z: [[f64; 5]; 5] = [
    [1.0, 0.0, -0.3, 0.4, 0.0],
    [1.0, 0.1, 0.0, 0.4, 0.0],
    [1.0, -0.2, 0.6, 0.2, 0.0],
    [1.0, 0.0, 0.0, -0.4, -0.3],
    [1.0, 0.0, 0.0, -0.6, 0.2],
];

pub const FIVE_AGENT_Z_INV_ROUNDED: [[f64; 5]; 5] = [
    [0.236, 0.236, 0.118, 0.164, 0.245],
    [-4.182, 5.818, -2.091, 0.182, 0.273],
    [-1.939, 1.394, 0.697, -0.061, -0.091],
    [0.455, 0.455, 0.227, -0.455, -0.682],
    [0.182, 0.182, 0.091, -2.182, 1.727],
];

/// Basic block of the projector as published, three decimals.
pub const FIVE_AGENT_S_ROUNDED: [[f64; 5]; 5] = [
    [0.818, -0.182, -0.091, 0.182, 0.273],
    [-0.182, 0.818, -0.091, 0.182, 0.273],
    [-0.091, -0.091, 0.955, 0.091, 0.136],
    [0.182, 0.182, 0.091, 0.818, -0.273],
    [0.273, 0.273, 0.136, -0.272, 0.591],
];
