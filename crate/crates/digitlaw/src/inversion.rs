//! Inversion of windowed profiles: solve the box-sum shift equation
//!
//! ```text
//! S V(s) = sum_{i=m}^{n-1} V(s + i) = G(s),   s in [0, 1]
//! ```
//!
//! for the centered, normalized distribution function `V` on `[m, n]`, and
//! recover densities from single-decade profiles.
//!
//! The box-sum operator has a nontrivial kernel for windows longer than one
//! decade: period-`L` oscillations (spanned by `cos(2 pi q s / L)` and
//! `sin(2 pi q s / L)` with 1-periodic amplitudes) sum to zero and are
//! invisible in the profile. The solver returns the canonical
//! minimal-oscillation representative: the solution whose increment vector
//! has minimum Euclidean norm. Minimizing increments (a discrete
//! first-derivative energy) rather than values is what annihilates the
//! oscillatory modes — the first-order optimality condition forces the
//! solution's derivative to be orthogonal to the derivative of every
//! kernel element — and it reproduces the affine particular solutions of
//! the worked window examples.

use serde::Serialize;

use crate::density::Density;
use crate::error::{Error, Result};
use crate::profiles::{Profile, WindowSpec};

/// A box-sum inversion problem: a tabulated target profile over `[0, 1]`
/// and the decade window it was measured on.
#[derive(Debug, Clone, Serialize)]
pub struct BoxSumProblem {
    pub window: WindowSpec,
    /// Target knots on the uniform grid `s_j = j / (len - 1)`.
    pub target: Vec<f64>,
}

impl BoxSumProblem {
    pub fn new(window: WindowSpec, target: Vec<f64>) -> Result<Self> {
        if target.len() < 3 {
            return Err(Error::Resolution(format!(
                "target grid of {} knots is too coarse; use at least 3",
                target.len()
            )));
        }
        if target[0].abs() > 1e-9 || (target[target.len() - 1] - 1.0).abs() > 1e-9 {
            return Err(Error::Validation(format!(
                "target must run from 0 to 1, got {} to {}",
                target[0],
                target[target.len() - 1]
            )));
        }
        if target.windows(2).any(|w| w[1] < w[0] - 1e-9) {
            return Err(Error::Validation(
                "target profile must be nondecreasing".into(),
            ));
        }
        Ok(BoxSumProblem { window, target })
    }

    /// Sample a profile onto a `grid + 1` knot problem.
    pub fn from_profile(window: WindowSpec, g: &Profile, grid: usize) -> Result<Self> {
        let target = (0..=grid).map(|j| g.eval(j as f64 / grid as f64)).collect();
        BoxSumProblem::new(window, target)
    }
}

/// Apply the box-sum operator to a function on `[m, n]`:
/// `(S v)(s) = sum_{i=m}^{n-1} v(s + i)`.
pub fn box_sum_apply<F: Fn(f64) -> f64>(v: &F, window: &WindowSpec, s: f64) -> f64 {
    (window.low..window.high).map(|i| v(s + f64::from(i))).sum()
}

/// Result of inverting a box-sum problem.
#[derive(Debug, Clone, Serialize)]
pub struct Reconstruction {
    pub window: WindowSpec,
    /// Grid resolution per unit interval.
    pub grid: usize,
    /// Centered solution `V` on `[m, n]`, `L * grid + 1` knots.
    pub v_knots: Vec<f64>,
    /// Normalized distribution `F~ = V + c` with `F~(m) = 0`, `F~(n) = 1`.
    pub f_tilde: Vec<f64>,
    /// Centering constant implied by the normalization.
    pub c: f64,
    /// Energy of the returned solution's projection onto the oscillatory
    /// kernel modes (measured on increments). Zero up to roundoff for the
    /// canonical representative; reported so non-uniqueness stays visible.
    pub kernel_energy: f64,
    /// Sup-norm equation residual on the grid.
    pub residual: f64,
    /// Largest monotonicity violation of `F~` (0 when monotone). Checked,
    /// not repaired.
    pub monotone_defect: f64,
}

impl Reconstruction {
    /// `V(t)` by linear interpolation, `t` in `[m, n]`.
    pub fn v_at(&self, t: f64) -> f64 {
        interp_on(&self.v_knots, self.window, self.grid, t)
    }

    /// `F~(t)` by linear interpolation, `t` in `[m, n]`.
    pub fn f_tilde_at(&self, t: f64) -> f64 {
        interp_on(&self.f_tilde, self.window, self.grid, t)
    }
}

fn interp_on(knots: &[f64], window: WindowSpec, grid: usize, t: f64) -> f64 {
    let pos = (t - f64::from(window.low)) * grid as f64;
    let max = (knots.len() - 1) as f64;
    let pos = pos.clamp(0.0, max);
    let i = (pos.floor() as usize).min(knots.len() - 2);
    let frac = pos - i as f64;
    knots[i] + frac * (knots[i + 1] - knots[i])
}

/// Invert the box-sum equation for the canonical minimal-oscillation `V`.
pub fn invert_box_sum(problem: &BoxSumProblem) -> Result<Reconstruction> {
    let grid = problem.target.len() - 1;
    let len = problem.window.len() as usize;
    let g = &problem.target;

    // Lagrange multipliers for the increment-space minimum-norm solution.
    // The Gram matrix of the constraint rows is L * min(j, j'), whose
    // inverse is the second-difference (tridiagonal) stencil.
    let lf = len as f64;
    let mut lambda = vec![0.0f64; grid + 1]; // lambda[1..=grid]
    for j in 1..grid {
        lambda[j] = (2.0 * g[j] - g[j - 1] - g[j + 1]) / lf;
    }
    lambda[grid] = (g[grid] - g[grid - 1]) / lf;

    // Increment per residue class: suffix sums of the multipliers. The
    // same increment repeats in every unit interval of [m, n].
    let mut inc = vec![0.0f64; grid];
    let mut suffix = 0.0;
    for r in (0..grid).rev() {
        suffix += lambda[r + 1];
        inc[r] = suffix;
    }
    let inc_total: f64 = inc.iter().sum();

    // Base value from the s = 0 equation: sum_i V(m + i) = g[0].
    let v0 = g[0] / lf - inc_total * (lf - 1.0) / 2.0;

    let mut v_knots = Vec::with_capacity(len * grid + 1);
    v_knots.push(v0);
    for u in 0..len * grid {
        let last = *v_knots.last().unwrap();
        v_knots.push(last + inc[u % grid]);
    }

    // Equation residual on the grid.
    let mut residual = 0.0f64;
    for j in 0..=grid {
        let total: f64 = (0..len).map(|i| v_knots[i * grid + j]).sum();
        residual = residual.max((total - g[j]).abs());
    }
    if residual > 1e-8 {
        return Err(Error::Resolution(format!(
            "solver residual {residual:.3e}; increase the grid resolution"
        )));
    }

    // Oscillatory content of the returned solution, measured on increments
    // against the discretized kernel modes cos/sin(2 pi q t / L).
    let mut kernel_energy = 0.0;
    let h = 1.0 / grid as f64;
    for q in 1..len {
        let omega = 2.0 * std::f64::consts::PI * q as f64 / lf;
        let mode = |u: usize| omega * (u as f64 * h);
        let mut dot_c = 0.0;
        let mut dot_s = 0.0;
        let mut norm_c = 0.0;
        let mut norm_s = 0.0;
        for u in 0..len * grid {
            let dv = v_knots[u + 1] - v_knots[u];
            let dc = mode(u + 1).cos() - mode(u).cos();
            let ds = mode(u + 1).sin() - mode(u).sin();
            dot_c += dv * dc;
            dot_s += dv * ds;
            norm_c += dc * dc;
            norm_s += ds * ds;
        }
        kernel_energy += dot_c * dot_c / norm_c.max(1e-300) + dot_s * dot_s / norm_s.max(1e-300);
    }

    let c = -v0;
    let f_tilde: Vec<f64> = v_knots.iter().map(|v| v - v0).collect();
    let monotone_defect = inc.iter().fold(0.0f64, |worst, &d| worst.max(-d)).max(0.0);

    Ok(Reconstruction {
        window: problem.window,
        grid,
        v_knots,
        f_tilde,
        c,
        kernel_energy,
        residual,
        monotone_defect,
    })
}

/// Distribution function on `[10^m, 10^n)` assembled from a reconstruction:
/// `F(10^t) = F_low + (F_high - F_low) * F~(t)`.
#[derive(Debug, Clone)]
pub struct WindowCdf {
    rec: Reconstruction,
    f_low: f64,
    f_high: f64,
}

pub fn reconstruct_cdf(rec: &Reconstruction, f_low: f64, f_high: f64) -> Result<WindowCdf> {
    if f_low.is_nan() || f_high.is_nan() || f_high <= f_low {
        return Err(Error::Domain(format!(
            "need F_high > F_low, got {f_low} and {f_high}"
        )));
    }
    Ok(WindowCdf {
        rec: rec.clone(),
        f_low,
        f_high,
    })
}

impl WindowCdf {
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Domain(format!("cdf argument {x} invalid")));
        }
        let t = x.log10();
        let (m, n) = (
            f64::from(self.rec.window.low),
            f64::from(self.rec.window.high),
        );
        if !(m..n).contains(&t) && t != n {
            return Err(Error::Domain(format!(
                "{x} lies outside the window [10^{}, 10^{})",
                self.rec.window.low, self.rec.window.high
            )));
        }
        Ok(self.f_low + (self.f_high - self.f_low) * self.rec.f_tilde_at(t))
    }
}

/// Density on the decade `[10^d, 10^(d+1)]` recovered from a differentiable
/// profile: `f(x) = G'(s) / (x ln 10)` with `s = log10 x - d`.
///
/// A profile with a jump would need an atom there; such profiles are
/// rejected with the jump location.
#[derive(Clone)]
pub struct ProfileDensity {
    g: Profile,
    decade: i32,
}

pub fn density_from_profile(g: &Profile, decade: i32) -> Result<ProfileDensity> {
    if g.kind() == "empirical" {
        let err = g
            .derivative(0.5)
            .expect_err("step profiles have no density");
        return Err(err);
    }
    // Probe for jumps: a genuine jump keeps its value gap as the window
    // shrinks, a kink's gap vanishes linearly.
    let probes = 512;
    for i in 1..probes {
        let s = i as f64 / probes as f64;
        if g.derivative(s).is_ok() {
            continue;
        }
        let wide = g.eval(s + 1e-4) - g.eval(s - 1e-4);
        let narrow = g.eval(s + 1e-7) - g.eval(s - 1e-7);
        if narrow > 0.5 * wide && wide > 1e-9 {
            return Err(Error::NotDifferentiable {
                at: s,
                what: "profile jumps here; the decade density would need an atom".into(),
            });
        }
    }
    Ok(ProfileDensity {
        g: g.clone(),
        decade,
    })
}

impl ProfileDensity {
    fn phase(&self, x: f64) -> f64 {
        (x.log10() - f64::from(self.decade)).clamp(0.0, 1.0)
    }
}

impl Density for ProfileDensity {
    fn pdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        let s = self.phase(x);
        let slope = self
            .g
            .derivative(s)
            .or_else(|_| self.g.derivative((s - 1e-9).max(0.0)))
            .or_else(|_| self.g.derivative((s + 1e-9).min(1.0)))
            .unwrap_or(f64::NAN);
        slope / (x * std::f64::consts::LN_10)
    }

    fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            0.0
        } else if x >= hi {
            1.0
        } else {
            self.g.eval(self.phase(x))
        }
    }

    fn support(&self) -> (f64, f64) {
        (10f64.powi(self.decade), 10f64.powi(self.decade + 1))
    }

    fn name(&self) -> String {
        format!("profile-density[decade {}]", self.decade)
    }
}
