//! Run-wide budgets and the sampling seed.

/// Budgets and the seed governing every bounded sweep in the crate.
///
/// All randomized procedures are deterministic given `seed`; reports echo
/// the seed they ran with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    /// Seed for all sampled sweeps.
    pub seed: u64,
    /// Exhaustive assignment sweeps are used when the assignment-space
    /// size does not exceed this bound; larger spaces are sampled.
    pub assignment_budget: u64,
    /// Number of random assignments drawn when sampling.
    pub samples: u64,
    /// Cap on distinct decorated variables per decision; beyond it the
    /// verdict is `unknown(budget)`.
    pub decorated_var_cap: usize,
    /// Cap on the free-algebra alphabet `m * |monoid|`.
    pub alphabet_cap: usize,
    /// Cap on the number of points `u^n` of a unit.
    pub point_cap: usize,
    /// Dimension cap for enumerating the permutation group `S_n`.
    pub perm_enum_cap: usize,
    /// Dimension cap for enumerating the transformation monoid `^nn`.
    pub map_enum_cap: usize,
    /// Node budget for canonical-form trace searches.
    pub trace_node_budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0x7a5a_0001,
            assignment_budget: 1 << 20,
            samples: 10_000,
            decorated_var_cap: 24,
            alphabet_cap: 24,
            point_cap: 1 << 20,
            perm_enum_cap: 6,
            map_enum_cap: 4,
            trace_node_budget: 5_000_000,
        }
    }
}

impl Config {
    pub fn with_seed(seed: u64) -> Self {
        Config {
            seed,
            ..Config::default()
        }
    }
}
