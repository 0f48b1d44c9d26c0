//! Minimization of outage over the harvesting parameter (τ or ρ).
//!
//! A coarse scan over `{0.02, 0.04, …, 0.98}` selects the best cell, which is
//! then refined by golden-section search. If the refined point is worse than
//! the cell's endpoints the objective is not unimodal there, and the result
//! falls back to a dense scan with step `1e-3`.

use crate::analytic;
use crate::error::{OutageError, Result};
use crate::model::{Harvesting, Scenario, SystemConfig};

pub const DEFAULT_TOL: f64 = 1e-3;
const GRID_STEP: f64 = 0.02;
const GRID_POINTS: usize = 49;
const DENSE_STEP: f64 = 1e-3;
const EDGE: f64 = 1e-3;
/// `1/φ`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptResult {
    /// Minimizing τ or ρ.
    pub arg_opt: f64,
    pub value_opt: f64,
    pub evaluations: usize,
    /// Width of the final golden-section bracket.
    pub bracket: f64,
    /// False when the dense-grid fallback was taken.
    pub unimodal: bool,
}

/// Minimizes the analytic outage of a TSR or PSR scenario over its free parameter.
pub fn minimize_over_eh_param(
    cfg: &SystemConfig,
    scenario: &Scenario,
    tol: f64,
) -> Result<OptResult> {
    if scenario.eh == Harvesting::Ideal {
        return Err(OutageError::Scenario(
            "ideal relaying receiver has no harvesting parameter to optimize".into(),
        ));
    }
    cfg.validate()?;
    minimize_unit_interval(
        |p| Ok(analytic::evaluate(cfg, &scenario.with_eh_param(p))?.value),
        tol,
    )
}

/// Grid-then-golden minimization of `f` over `(0, 1)`.
pub fn minimize_unit_interval<F>(mut f: F, tol: f64) -> Result<OptResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(tol > 0.0 && tol < 0.5) {
        return Err(crate::error::domain("tol", tol, "must lie in (0, 0.5)"));
    }
    let mut evaluations = 0usize;
    let mut eval = |p: f64, n: &mut usize| -> Result<f64> {
        *n += 1;
        f(p)
    };

    let grid: Vec<f64> = (1..=GRID_POINTS).map(|i| i as f64 * GRID_STEP).collect();
    let mut values = Vec::with_capacity(grid.len());
    for &p in &grid {
        values.push(eval(p, &mut evaluations)?);
    }
    let best = (0..grid.len())
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .expect("non-empty grid");
    let (grid_arg, grid_val) = (grid[best], values[best]);
    let lo = if best == 0 { EDGE } else { grid[best - 1] };
    let hi = if best + 1 == grid.len() {
        1.0 - EDGE
    } else {
        grid[best + 1]
    };

    let (mut a, mut b) = (lo, hi);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut evaluations)?;
    let mut fd = eval(d, &mut evaluations)?;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut evaluations)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut evaluations)?;
        }
    }
    let (gold_arg, gold_val) = if fc <= fd { (c, fc) } else { (d, fd) };

    // Endpoints of the refined cell must not beat its interior.
    let f_lo = if best == 0 {
        eval(lo, &mut evaluations)?
    } else {
        values[best - 1]
    };
    let f_hi = if best + 1 == grid.len() {
        eval(hi, &mut evaluations)?
    } else {
        values[best + 1]
    };
    let unimodal = gold_val <= f_lo.min(f_hi).max(grid_val);

    if !unimodal {
        let mut arg = grid_arg;
        let mut val = grid_val;
        let n = (1.0 / DENSE_STEP).round() as usize;
        for i in 1..n {
            let p = i as f64 * DENSE_STEP;
            let fp = eval(p, &mut evaluations)?;
            if fp < val {
                arg = p;
                val = fp;
            }
        }
        return Ok(OptResult {
            arg_opt: arg,
            value_opt: val,
            evaluations,
            bracket: DENSE_STEP,
            unimodal: false,
        });
    }

    let (arg_opt, value_opt) = if gold_val <= grid_val {
        (gold_arg, gold_val)
    } else {
        (grid_arg, grid_val)
    };
    Ok(OptResult {
        arg_opt,
        value_opt,
        evaluations,
        bracket: b - a,
        unimodal: true,
    })
}
