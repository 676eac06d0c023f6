//! Size guards against accidental exponential blow-up.
//!
//! Defaults can be overridden through environment variables, read at the
//! time a [`Budget`] is built with [`Budget::from_env`].

use crate::error::{Error, Result};

pub const POINT_BUDGET_ENV: &str = "PLANAR_JETS_POINT_BUDGET";
pub const NODE_BUDGET_ENV: &str = "PLANAR_JETS_NODE_BUDGET";
pub const PAIR_BUDGET_ENV: &str = "PLANAR_JETS_PAIR_BUDGET";

pub const DEFAULT_POINT_BUDGET: u128 = 1_000_000;
/// 2048 × 2048 grid nodes.
pub const DEFAULT_NODE_BUDGET: u128 = 1 << 22;
/// Ordered pairs in a single O(N²) scan.
pub const DEFAULT_PAIR_BUDGET: u128 = 500_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub points: u128,
    pub nodes: u128,
    pub pairs: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            points: DEFAULT_POINT_BUDGET,
            nodes: DEFAULT_NODE_BUDGET,
            pairs: DEFAULT_PAIR_BUDGET,
        }
    }
}

impl Budget {
    /// Defaults, overridden by any of the budget environment variables that
    /// parse as unsigned integers.
    pub fn from_env() -> Self {
        let read = |key: &str, default: u128| {
            std::env::var(key)
                .ok()
                .and_then(|v| v.trim().parse::<u128>().ok())
                .unwrap_or(default)
        };
        Self {
            points: read(POINT_BUDGET_ENV, DEFAULT_POINT_BUDGET),
            nodes: read(NODE_BUDGET_ENV, DEFAULT_NODE_BUDGET),
            pairs: read(PAIR_BUDGET_ENV, DEFAULT_PAIR_BUDGET),
        }
    }

    pub fn check_points(&self, requested: u128) -> Result<()> {
        check("point count", requested, self.points)
    }

    pub fn check_nodes(&self, requested: u128) -> Result<()> {
        check("grid node count", requested, self.nodes)
    }

    pub fn check_pairs(&self, requested: u128) -> Result<()> {
        check("pair scan", requested, self.pairs)
    }
}

fn check(what: &'static str, requested: u128, budget: u128) -> Result<()> {
    if requested > budget {
        Err(Error::BudgetExceeded {
            what,
            requested,
            budget,
        })
    } else {
        Ok(())
    }
}
