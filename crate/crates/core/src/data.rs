//! Built-in datasets.

use crate::distribution::Sample;

/// Transformed daily percentage change of the NIFTY 50 index (n = 82), as
/// printed to two decimals.
pub const NIFTY50: [f64; 82] = [
    -0.64, -2.33, -2.98, 0.14, 0.30, -0.11, -1.20, -0.31, 0.06, -0.91, -0.86, 0.07, 0.77, 0.22, -0.13, -1.80, -0.42,
    0.27, -0.51, 0.07, -0.55, -0.81, -0.51, -1.87, -1.76, -1.81, -1.59, -3.46, -0.05, -1.77, -0.85, 0.59, 0.57, 0.36,
    -2.04, -1.05, -2.53, -0.49, 0.34, 0.01, -2.11, -3.86, 2.23, -0.97, -0.90, -0.96, -1.20, -1.47, -0.97, -5.58, 1.73,
    0.01, -1.92, -1.45, -2.33, -3.15, 0.15, 1.27, 0.73, -0.59, 0.65, -2.03, 1.07, 1.04, -1.78, 0.36, -1.20, -0.93,
    -1.20, -0.40, -0.20, 0.20, -0.99, 0.38, 1.37, -1.33, -1.63, -1.74, 0.02, -1.42, -1.62, -1.11,
];

pub fn nifty50() -> Sample {
    Sample::new(NIFTY50.to_vec()).expect("built-in dataset is valid")
}
