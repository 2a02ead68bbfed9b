//! Shared fixtures for the benchmarks.

use kleinfold::{chain_motions, AtlasMap, FigureConfig};

/// Figure for `n` sides with unit radius and a strip height 25% above the minimum.
pub fn figure(n: usize) -> AtlasMap {
    let s = if n == 3 { 2.0 } else { 2.5 * (std::f64::consts::PI / n as f64).tan().recip() };
    chain_motions(&FigureConfig::new(n, 1.0, s).expect("valid figure")).expect("figure closes")
}
