//! Published reference values used by the study harness to report per-cell
//! deltas. These are Monte Carlo outputs from a single seed at N = 1000 and
//! are compared against, never asserted cell by cell.

/// Alternatives μ₁ of the power table, in row order.
pub const POWER_MU1: [f64; 16] = [
    -25.0, -15.0, -10.0, -5.0, -4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0, 5.0, 10.0, 15.0, 25.0,
];
/// Sample sizes of the power table, in column order.
pub const POWER_N: [usize; 5] = [50, 100, 150, 200, 250];

/// Published power, `[row][column]` over [`POWER_MU1`] × [`POWER_N`].
pub const POWER: [[f64; 5]; 16] = [
    [0.095, 0.136, 0.175, 0.184, 0.236],
    [0.159, 0.26, 0.304, 0.365, 0.467],
    [0.29, 0.422, 0.556, 0.688, 0.709],
    [0.662, 0.923, 0.984, 0.996, 1.0],
    [0.868, 0.985, 0.999, 1.0, 1.0],
    [0.984, 1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [1.0, 1.0, 1.0, 1.0, 1.0],
    [0.982, 1.0, 1.0, 1.0, 1.0],
    [0.855, 0.987, 1.0, 1.0, 1.0],
    [0.673, 0.928, 0.981, 0.997, 0.999],
    [0.321, 0.414, 0.524, 0.667, 0.732],
    [0.165, 0.245, 0.401, 0.396, 0.433],
    [0.117, 0.153, 0.188, 0.198, 0.204],
];

/// Published cutoff k (not log k), same layout as [`POWER`].
pub const CUTOFF_K: [[f64; 5]; 16] = [
    [1.81046, 2.13942, 2.43615, 2.86453, 2.78399],
    [2.36273, 2.77728, 3.83689, 3.80542, 3.53951],
    [3.03149, 4.16676, 3.94934, 3.12039, 3.4524],
    [4.26374, 1.34236, 0.63367, 0.0763, 0.0129],
    [2.46656, 0.53052, 0.01091, 0.00016, 0.0],
    [0.6219, 0.00013, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [0.79937, 0.00001, 0.0, 0.0, 0.0],
    [2.49584, 0.3491, 0.01026, 0.00006, 0.0],
    [3.65291, 1.54359, 0.61227, 0.0741, 0.0149],
    [2.76303, 3.85758, 4.71173, 3.05039, 3.37577],
    [2.39985, 3.29963, 2.82202, 3.74806, 3.83881],
    [1.77401, 2.11612, 2.40579, 2.72554, 2.96513],
];

/// (power, k) published for a cell, if it is on the grid.
pub fn power_cell(mu1: f64, n: usize) -> Option<(f64, f64)> {
    let row = POWER_MU1.iter().position(|m| *m == mu1)?;
    let col = POWER_N.iter().position(|c| *c == n)?;
    Some((POWER[row][col], CUTOFF_K[row][col]))
}

/// Significance levels and alternatives of the maximum-n table.
pub const MAX_N_ALPHA: [f64; 2] = [0.01, 0.05];
pub const MAX_N_MU1: [f64; 6] = [-5.0, -3.0, -1.0, 1.0, 3.0, 5.0];
/// Published maximum n, `[alpha][mu1]`.
pub const MAX_N: [[u64; 6]; 2] = [[6, 4, 3, 3, 2, 2], [4, 3, 2, 2, 2, 1]];

/// μ values of the interval tables, in row order.
pub const CI_MU: [f64; 18] = [
    -5.0, -4.0, -3.0, -2.0, -1.5, -1.0, -0.75, -0.5, -0.25, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0,
];
/// Sample sizes of the interval tables, in column order.
pub const CI_N: [usize; 4] = [50, 100, 150, 250];

/// One published normal-method cell: plain and outlier-filtered values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalCell {
    pub v_hat: f64,
    pub al: f64,
    pub cp: f64,
    pub v_hat_mod: f64,
    pub al_mod: f64,
    pub cp_mod: f64,
}

const fn nc(v_hat: f64, al: f64, cp: f64, v_hat_mod: f64, al_mod: f64, cp_mod: f64) -> NormalCell {
    NormalCell {
        v_hat,
        al,
        cp,
        v_hat_mod,
        al_mod,
        cp_mod,
    }
}

/// Normal-method tables, `[mu][n]` over [`CI_MU`] × [`CI_N`].
pub const NORMAL: [[NormalCell; 4]; 18] = [
    [
        nc(9030.238, 372.501, 0.998, 10.297, 12.579, 0.9),
        nc(249.492, 61.916, 0.996, 2.119, 5.706, 0.887),
        nc(1.573, 4.916, 0.931, 0.855, 3.625, 0.874),
        nc(4.196, 8.029, 0.996, 1.456, 4.731, 0.968),
    ],
    [
        nc(0.144, 1.489, 0.406, 0.135, 1.441, 0.387),
        nc(0.464, 2.671, 0.838, 0.349, 2.317, 0.774),
        nc(113.102, 41.688, 1.0, 2.666, 6.4, 0.993),
        nc(0.357, 2.344, 0.953, 0.271, 2.04, 0.919),
    ],
    [
        nc(4.72, 8.516, 0.991, 0.674, 3.218, 0.931),
        nc(0.301, 2.151, 0.942, 0.193, 1.723, 0.892),
        nc(0.234, 1.896, 0.96, 0.198, 1.744, 0.945),
        nc(0.114, 1.326, 0.943, 0.103, 1.259, 0.929),
    ],
    [
        nc(0.174, 1.635, 0.925, 0.143, 1.484, 0.889),
        nc(0.046, 0.836, 0.82, 0.042, 0.806, 0.808),
        nc(0.057, 0.936, 0.933, 0.051, 0.885, 0.922),
        nc(0.021, 0.571, 0.876, 0.019, 0.541, 0.858),
    ],
    [
        nc(0.099, 1.234, 0.935, 0.093, 1.196, 0.927),
        nc(0.04, 0.782, 0.932, 0.036, 0.744, 0.909),
        nc(0.026, 0.629, 0.946, 0.023, 0.597, 0.931),
        nc(0.013, 0.438, 0.909, 0.011, 0.412, 0.884),
    ],
    [
        nc(0.062, 0.977, 0.974, 0.055, 0.918, 0.963),
        nc(0.018, 0.528, 0.927, 0.016, 0.492, 0.907),
        nc(0.01, 0.39, 0.906, 0.009, 0.378, 0.898),
        nc(0.006, 0.3, 0.922, 0.006, 0.292, 0.915),
    ],
    [
        nc(0.029, 0.665, 0.936, 0.026, 0.631, 0.923),
        nc(0.01, 0.395, 0.907, 0.01, 0.384, 0.901),
        nc(0.008, 0.349, 0.937, 0.007, 0.337, 0.931),
        nc(0.004, 0.245, 0.926, 0.004, 0.233, 0.915),
    ],
    [
        nc(0.009, 0.377, 0.832, 0.009, 0.375, 0.832),
        nc(0.008, 0.35, 0.957, 0.007, 0.326, 0.941),
        nc(0.003, 0.227, 0.886, 0.003, 0.217, 0.874),
        nc(0.002, 0.177, 0.897, 0.002, 0.165, 0.886),
    ],
    [
        nc(0.001, 0.146, 0.597, 0.001, 0.14, 0.58),
        nc(0.004, 0.233, 0.918, 0.003, 0.212, 0.903),
        nc(0.002, 0.163, 0.906, 0.002, 0.156, 0.894),
        nc(0.001, 0.13, 0.929, 0.001, 0.121, 0.916),
    ],
    [
        nc(0.005, 0.265, 0.825, 0.005, 0.263, 0.825),
        nc(0.004, 0.257, 0.953, 0.004, 0.237, 0.942),
        nc(0.001, 0.149, 0.873, 0.001, 0.137, 0.853),
        nc(0.001, 0.124, 0.925, 0.001, 0.115, 0.904),
    ],
    [
        nc(0.011, 0.416, 0.87, 0.011, 0.409, 0.865),
        nc(0.009, 0.365, 0.955, 0.008, 0.341, 0.943),
        nc(0.002, 0.173, 0.819, 0.002, 0.163, 0.799),
        nc(0.002, 0.19, 0.924, 0.002, 0.183, 0.917),
    ],
    [
        nc(0.023, 0.588, 0.89, 0.021, 0.565, 0.876),
        nc(0.012, 0.425, 0.923, 0.011, 0.411, 0.913),
        nc(0.007, 0.332, 0.933, 0.006, 0.316, 0.92),
        nc(0.004, 0.256, 0.96, 0.004, 0.236, 0.943),
    ],
    [
        nc(0.021, 0.564, 0.787, 0.018, 0.531, 0.762),
        nc(0.019, 0.547, 0.943, 0.018, 0.53, 0.937),
        nc(0.01, 0.383, 0.887, 0.009, 0.362, 0.872),
        nc(0.007, 0.33, 0.93, 0.006, 0.31, 0.922),
    ],
    [
        nc(0.088, 1.164, 0.931, 0.082, 1.124, 0.92),
        nc(0.026, 0.631, 0.845, 0.024, 0.602, 0.821),
        nc(0.021, 0.569, 0.891, 0.019, 0.541, 0.878),
        nc(0.014, 0.471, 0.922, 0.013, 0.448, 0.909),
    ],
    [
        nc(0.33, 2.253, 0.983, 0.279, 2.069, 0.973),
        nc(0.125, 1.386, 0.98, 0.109, 1.294, 0.971),
        nc(0.034, 0.722, 0.877, 0.032, 0.704, 0.866),
        nc(0.045, 0.834, 0.976, 0.041, 0.79, 0.966),
    ],
    [
        nc(9.448, 12.049, 0.999, 0.747, 3.387, 0.944),
        nc(0.604, 3.046, 0.982, 0.453, 2.638, 0.971),
        nc(0.11, 1.303, 0.846, 0.098, 1.23, 0.815),
        nc(0.06, 0.961, 0.829, 0.056, 0.926, 0.812),
    ],
    [
        nc(144.008, 47.04, 0.992, 1.803, 5.263, 0.904),
        nc(1944.417, 172.851, 1.0, 5.673, 9.337, 0.992),
        nc(1.765, 5.207, 0.988, 0.808, 3.524, 0.963),
        nc(0.934, 3.788, 0.989, 0.61, 3.061, 0.982),
    ],
    [
        nc(31.615, 22.041, 0.951, 1.392, 4.624, 0.722),
        nc(568.554, 93.468, 0.996, 1.58, 4.928, 0.885),
        nc(0.368, 2.378, 0.667, 0.27, 2.038, 0.594),
        nc(0.751, 3.396, 0.92, 0.45, 2.631, 0.843),
    ],
];

/// One published percentile-method cell: (AL, CP) plain and filtered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercentileCell {
    pub al: f64,
    pub cp: f64,
    pub al_mod: f64,
    pub cp_mod: f64,
}

const fn pc(al: f64, cp: f64, al_mod: f64, cp_mod: f64) -> PercentileCell {
    PercentileCell { al, cp, al_mod, cp_mod }
}

/// Percentile-method tables, `[mu][n]` over [`CI_MU`] × [`CI_N`].
pub const PERCENTILE: [[PercentileCell; 4]; 18] = [
    [
        pc(93.947, 1.0, 12.462, 1.0),
        pc(10.843, 1.0, 5.715, 1.0),
        pc(4.889, 1.0, 3.631, 1.0),
        pc(6.779, 1.0, 4.84, 1.0),
    ],
    [
        pc(1.523, 0.0, 1.429, 0.0),
        pc(2.634, 1.0, 2.273, 1.0),
        pc(11.056, 1.0, 6.209, 1.0),
        pc(2.232, 1.0, 2.0, 1.0),
    ],
    [
        pc(4.458, 1.0, 3.214, 1.0),
        pc(1.91, 1.0, 1.744, 1.0),
        pc(1.853, 1.0, 1.695, 1.0),
        pc(1.289, 1.0, 1.216, 1.0),
    ],
    [
        pc(1.652, 1.0, 1.539, 1.0),
        pc(0.809, 0.0, 0.775, 0.0),
        pc(0.924, 1.0, 0.882, 1.0),
        pc(0.575, 0.001, 0.549, 0.0),
    ],
    [
        pc(1.248, 1.0, 1.186, 1.0),
        pc(0.797, 1.0, 0.765, 1.0),
        pc(0.617, 1.0, 0.59, 1.0),
        pc(0.448, 1.0, 0.428, 1.0),
    ],
    [
        pc(0.949, 1.0, 0.908, 1.0),
        pc(0.531, 1.0, 0.508, 1.0),
        pc(0.37, 0.0, 0.353, 0.0),
        pc(0.296, 0.999, 0.282, 0.999),
    ],
    [
        pc(0.68, 1.0, 0.648, 1.0),
        pc(0.39, 1.0, 0.371, 1.0),
        pc(0.338, 1.0, 0.322, 1.0),
        pc(0.245, 1.0, 0.232, 1.0),
    ],
    [
        pc(0.388, 0.0, 0.381, 0.0),
        pc(0.349, 1.0, 0.331, 1.0),
        pc(0.231, 0.264, 0.217, 0.172),
        pc(0.176, 0.872, 0.166, 0.816),
    ],
    [
        pc(0.13, 0.0, 0.127, 0.0),
        pc(0.234, 1.0, 0.217, 1.0),
        pc(0.176, 1.0, 0.164, 1.0),
        pc(0.135, 1.0, 0.127, 1.0),
    ],
    [
        pc(0.236, 0.022, 0.235, 0.013),
        pc(0.256, 1.0, 0.238, 1.0),
        pc(0.148, 0.0, 0.137, 0.0),
        pc(0.124, 1.0, 0.117, 1.0),
    ],
    [
        pc(0.412, 0.0, 0.389, 0.0),
        pc(0.362, 1.0, 0.343, 1.0),
        pc(0.174, 0.0, 0.162, 0.0),
        pc(0.19, 1.0, 0.179, 1.0),
    ],
    [
        pc(0.593, 1.0, 0.563, 1.0),
        pc(0.419, 1.0, 0.399, 1.0),
        pc(0.332, 1.0, 0.316, 1.0),
        pc(0.245, 1.0, 0.232, 1.0),
    ],
    [
        pc(0.556, 0.0, 0.527, 0.0),
        pc(0.543, 1.0, 0.519, 1.0),
        pc(0.413, 1.0, 0.393, 1.0),
        pc(0.321, 1.0, 0.306, 1.0),
    ],
    [
        pc(1.123, 1.0, 1.072, 1.0),
        pc(0.641, 0.0, 0.614, 0.0),
        pc(0.583, 1.0, 0.559, 1.0),
        pc(0.478, 1.0, 0.457, 1.0),
    ],
    [
        pc(2.192, 1.0, 1.964, 1.0),
        pc(1.387, 1.0, 1.303, 1.0),
        pc(0.74, 0.191, 0.709, 0.023),
        pc(0.85, 1.0, 0.812, 1.0),
    ],
    [
        pc(4.617, 1.0, 3.278, 1.0),
        pc(3.051, 1.0, 2.553, 1.0),
        pc(1.322, 1.0, 1.244, 1.0),
        pc(0.948, 0.0, 0.903, 0.0),
    ],
    [
        pc(11.734, 1.0, 5.35, 1.0),
        pc(29.377, 1.0, 9.984, 1.0),
        pc(4.662, 1.0, 3.521, 1.0),
        pc(3.848, 1.0, 3.139, 1.0),
    ],
    [
        pc(8.474, 1.0, 4.522, 1.0),
        pc(8.718, 1.0, 5.043, 1.0),
        pc(2.388, 0.019, 2.109, 0.0),
        pc(3.288, 1.0, 2.766, 1.0),
    ],
];

fn ci_index(mu: f64, n: usize) -> Option<(usize, usize)> {
    let row = CI_MU.iter().position(|m| *m == mu)?;
    let col = CI_N.iter().position(|c| *c == n)?;
    Some((row, col))
}

/// Published (AL, CP) for a study cell, if it is on the grid.
pub fn ci_cell(method: crate::intervals::CiMethod, modified: bool, mu: f64, n: usize) -> Option<(f64, f64)> {
    let (r, c) = ci_index(mu, n)?;
    Some(match (method, modified) {
        (crate::intervals::CiMethod::Normal, false) => (NORMAL[r][c].al, NORMAL[r][c].cp),
        (crate::intervals::CiMethod::Normal, true) => (NORMAL[r][c].al_mod, NORMAL[r][c].cp_mod),
        (crate::intervals::CiMethod::Percentile, false) => (PERCENTILE[r][c].al, PERCENTILE[r][c].cp),
        (crate::intervals::CiMethod::Percentile, true) => (PERCENTILE[r][c].al_mod, PERCENTILE[r][c].cp_mod),
    })
}

/// Application results on the NIFTY 50 data.
pub mod nifty50 {
    pub const MU_HAT: f64 = -2.589;
    pub const V_HAT: f64 = 0.269_876_7;
    pub const NORMAL_CI: (f64, f64) = (-3.607_195, -1.570_805);
    pub const V_HAT_MOD: f64 = 0.192_743_5;
    pub const NORMAL_CI_MOD: (f64, f64) = (-3.449_474, -1.728_526);
    pub const PERCENTILE_CI: (f64, f64) = (-3.760_858, -1.602_701);
    pub const PERCENTILE_CI_MOD: (f64, f64) = (-3.420_354, -1.622_304);
}
