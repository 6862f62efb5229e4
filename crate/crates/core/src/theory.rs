//! Numeric evaluation of the asymptotic quantities: Poisson tails, the
//! r-core threshold, the giant-root mu, the branching margin, core degree
//! and edge-count predictions, the parallel-stripping recursion, the
//! Molloy-Reed component criterion, and the core-density satisfiability
//! threshold.
//!
//! Conventions: for a k-uniform hypergraph at edge probability
//! `p = c / n^(k-1)`, the mean vertex degree is `lambda_0 = c/(k-1)!` and
//! the edge density is `m/n = c/k!`. Root brackets cover
//! `lambda in [1e-6, 50]`, enough for k, r up to 8 and c up to 100.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TheoryError {
    #[error("density c = {c} is not above the core threshold c* = {c_star}")]
    BelowThreshold { c: f64, c_star: f64 },
}

const LAMBDA_LO: f64 = 1e-6;
const LAMBDA_HI: f64 = 50.0;

/// Poisson pmf `P(Po(lambda) = j)` by upward recurrence.
pub fn poisson_pmf(lambda: f64, j: u32) -> f64 {
    if lambda == 0.0 {
        return if j == 0 { 1.0 } else { 0.0 };
    }
    let mut p = (-lambda).exp();
    for i in 0..j {
        p *= lambda / (i + 1) as f64;
    }
    p
}

/// Upper tail `P(Po(lambda) >= j0)`. The head is subtracted only when it is
/// small; otherwise the tail is summed directly, avoiding cancellation for
/// small lambda.
pub fn poisson_upper_tail(lambda: f64, j0: u32) -> f64 {
    if j0 == 0 {
        return 1.0;
    }
    if lambda == 0.0 {
        return 0.0;
    }
    let mut head = 0.0;
    let mut p = (-lambda).exp();
    for i in 0..j0 {
        head += p;
        p *= lambda / (i + 1) as f64;
    }
    if head < 0.5 {
        return 1.0 - head;
    }
    // p now holds pmf(j0); sum the tail until it is negligible.
    let mut tail = 0.0;
    let mut i = j0;
    loop {
        tail += p;
        p *= lambda / (i + 1) as f64;
        i += 1;
        if p == 0.0 || ((i as f64) > lambda && p < tail * 1e-17) {
            return tail;
        }
    }
}

/// `Psi_r(lambda) = e^{-lambda} sum_{i >= r-1} lambda^i / i!`.
pub fn psi(r: u32, lambda: f64) -> f64 {
    poisson_upper_tail(lambda, r - 1)
}

/// `sum_{i >= r-1} lambda^i / i!` without the exponential factor.
fn tail_series(r: u32, lambda: f64) -> f64 {
    let mut term = 1.0;
    for i in 1..r {
        term *= lambda / i as f64;
    }
    // term = lambda^{r-1}/(r-1)!
    let mut sum = 0.0;
    let mut i = r - 1;
    loop {
        sum += term;
        term *= lambda / (i + 1) as f64;
        i += 1;
        if term == 0.0 || ((i as f64) > lambda && term < sum * 1e-17) {
            return sum;
        }
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// `f_{k,r}(lambda) = (k-1)! lambda / Psi_r(lambda)^{k-1}`, whose minimum
/// over positive lambda is the core-emergence density.
pub fn f_kr(k: u32, r: u32, lambda: f64) -> f64 {
    factorial(k - 1) * lambda / psi(r, lambda).powi(k as i32 - 1)
}

/// The r-core threshold `c* = min f_{k,r}` and its minimizer `lambda*`.
///
/// Two independent routes are evaluated: a golden-section minimization of
/// `f` over `log lambda`, and a bisection on the stationarity condition
/// `sum_{i >= r-1} lambda^i / i! = (k-1) lambda^{r-1} / (r-2)!`. The
/// returned values come from the stationarity root; the routes must agree
/// to 1e-9 relative or this panics.
pub fn critical_density(k: u32, r: u32) -> (f64, f64) {
    let (c_min, c_root, lambda_star) = critical_density_routes(k, r);
    let rel = (c_root - c_min).abs() / c_root;
    assert!(rel <= 1e-9, "threshold routes disagree: {c_root} vs {c_min} (rel {rel:.3e})");
    (c_root, lambda_star)
}

/// Both routes to the threshold: (minimized value, stationarity-root value,
/// stationarity root).
pub fn critical_density_routes(k: u32, r: u32) -> (f64, f64, f64) {
    assert!(k >= 2 && r >= 2 && k + r > 4, "threshold defined for k+r > 4");

    // Route 1: golden section on t = ln lambda.
    let f_log = |t: f64| f_kr(k, r, t.exp());
    let (mut a, mut b) = (LAMBDA_LO.ln(), LAMBDA_HI.ln());
    let inv_phi = 0.618_033_988_749_894_9_f64;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let (mut f1, mut f2) = (f_log(x1), f_log(x2));
    for _ in 0..120 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f_log(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f_log(x2);
        }
    }
    let c_min = f_log(0.5 * (a + b));

    // Route 2: stationarity, f'(lambda) = 0.
    let g = |lambda: f64| tail_series(r, lambda) - (k - 1) as f64 * lambda.powi(r as i32 - 1) / factorial(r - 2);
    let (mut lo, mut hi) = (LAMBDA_LO, LAMBDA_HI);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let lambda_star = 0.5 * (lo + hi);
    (c_min, f_kr(k, r, lambda_star), lambda_star)
}

/// The larger root of `f_{k,r}(lambda) = c` for `c` above the threshold.
pub fn mu_of(k: u32, r: u32, c: f64) -> Result<f64, TheoryError> {
    let (c_star, lambda_star) = critical_density(k, r);
    if c <= c_star {
        return Err(TheoryError::BelowThreshold { c, c_star });
    }
    // f is increasing to the right of lambda*; bracket then bisect.
    let mut hi = lambda_star.max(1.0);
    while f_kr(k, r, hi) < c {
        hi *= 2.0;
        assert!(hi < 1e12, "mu bracket failed");
    }
    let mut lo = lambda_star;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f_kr(k, r, mid) < c {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let mu = 0.5 * (lo + hi);
    debug_assert!((f_kr(k, r, mu) - c).abs() <= 1e-10 * c);
    Ok(mu)
}

/// The branching margin
/// `zeta = 1 - (k-1) mu^{r-1} / ((r-2)! sum_{i >= r-1} mu^i / i!)`,
/// strictly positive above the threshold.
pub fn branching_margin(k: u32, r: u32, c: f64) -> Result<f64, TheoryError> {
    let mu = mu_of(k, r, c)?;
    Ok(1.0 - (k - 1) as f64 * mu.powi(r as i32 - 1) / (factorial(r - 2) * tail_series(r, mu)))
}

/// Predictions attached to a supercritical (k, r, c) point.
#[derive(Clone, Debug)]
pub struct ThresholdProfile {
    pub k: u32,
    pub r: u32,
    pub c: f64,
    pub c_star: f64,
    pub lambda_star: f64,
    pub mu: f64,
    pub zeta: f64,
    /// Total core degree per vertex: gamma = mu * Psi_r(mu).
    pub gamma: f64,
    /// Density of degree-2 core vertices: e^{-mu} mu^2 / 2.
    pub lambda2: f64,
    /// Fraction of vertices in the core: P(Po(mu) >= r).
    pub core_vertex_frac: f64,
    /// Core edges per vertex: (mu/k) Psi_r(mu).
    pub core_edge_per_n: f64,
}

impl ThresholdProfile {
    pub fn new(k: u32, r: u32, c: f64) -> Result<Self, TheoryError> {
        let (c_star, lambda_star) = critical_density(k, r);
        if c <= c_star {
            return Err(TheoryError::BelowThreshold { c, c_star });
        }
        let mu = mu_of(k, r, c)?;
        let zeta = 1.0 - (k - 1) as f64 * mu.powi(r as i32 - 1) / (factorial(r - 2) * tail_series(r, mu));
        let psi_r = psi(r, mu);
        Ok(ThresholdProfile {
            k,
            r,
            c,
            c_star,
            lambda_star,
            mu,
            zeta,
            gamma: mu * psi_r,
            lambda2: (-mu).exp() * mu * mu / 2.0,
            core_vertex_frac: poisson_upper_tail(mu, r),
            core_edge_per_n: mu / k as f64 * psi_r,
        })
    }

    /// Predicted fraction of vertices with core degree exactly `j` (j >= r).
    pub fn core_degree_frac(&self, j: u32) -> f64 {
        if j < self.r {
            0.0
        } else {
            poisson_pmf(self.mu, j)
        }
    }

    /// Edge density m/n corresponding to c.
    pub fn edge_density(&self) -> f64 {
        self.c / factorial(self.k)
    }
}

/// The parallel-stripping recursion:
/// `phi_0 = 1`, `lambda_t = c phi_t^{k-1} / (k-1)!`,
/// `phi_t = P(Po(lambda_{t-1}) >= r-1)`, with the degree-profile table
/// `rho_t(d)`.
#[derive(Clone, Debug)]
pub struct StripRecursion {
    pub phi: Vec<f64>,
    pub lambda: Vec<f64>,
    /// `rho[t][d]`: asymptotic fraction of vertices having degree d after t
    /// parallel rounds. Row 0 is the Poisson profile of the initial graph.
    pub rho: Vec<Vec<f64>>,
}

pub fn strip_recursion(k: u32, r: u32, c: f64, t_max: usize) -> StripRecursion {
    assert!(t_max >= 1);
    let lambda0 = c / factorial(k - 1);
    let mut phi = vec![1.0];
    let mut lambda = vec![lambda0];
    for t in 1..=t_max {
        let ph = poisson_upper_tail(lambda[t - 1], r - 1);
        phi.push(ph);
        lambda.push(c * ph.powi(k as i32 - 1) / factorial(k - 1));
    }

    let d_max = (lambda0 + 12.0 * lambda0.sqrt()).ceil() as u32 + r + 48;
    let mut rho = Vec::with_capacity(t_max + 1);
    rho.push((0..=d_max).map(|d| poisson_pmf(lambda0, d)).collect());
    for t in 1..=t_max {
        let row: Vec<f64> = (0..=d_max)
            .map(|d| {
                let base = poisson_pmf(lambda[t], d);
                if d >= r {
                    base
                } else {
                    base * poisson_upper_tail(lambda[t - 1] - lambda[t], r - d)
                }
            })
            .collect();
        rho.push(row);
    }
    StripRecursion { phi, lambda, rho }
}

/// `f_k(d) = d (1 - (d-1)(k-1))`, the hypergraph Molloy-Reed weight.
pub fn molloy_reed_f(k: u32, d: u32) -> f64 {
    d as f64 * (1.0 - (d as f64 - 1.0) * (k as f64 - 1.0))
}

/// `sum_d rho(d) f_k(d)`; positive means all components of a random
/// hypergraph with this degree profile are logarithmic. The profile's own
/// truncation keeps the omitted tail below 1e-12.
pub fn molloy_reed_sum(k: u32, rho: &[f64]) -> f64 {
    rho.iter()
        .enumerate()
        .skip(1)
        .map(|(d, &p)| p * molloy_reed_f(k, d as u32))
        .sum()
}

/// The satisfiability threshold estimate for r = 2: the density where core
/// edges equal core vertices, returned as m/n = c/k!.
pub fn sat_threshold_estimate(k: u32) -> f64 {
    assert!(k >= 3);
    let (_, lambda_star) = critical_density(k, 2);
    // (mu/k) Psi_2(mu) - P(Po(mu) >= 2) is increasing past lambda*; find
    // its root in mu, then map back to a density.
    let g = |mu: f64| mu / k as f64 * psi(2, mu) - poisson_upper_tail(mu, 2);
    let (mut lo, mut hi) = (lambda_star, LAMBDA_HI);
    debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-14 * hi {
            break;
        }
    }
    let mu_c = 0.5 * (lo + hi);
    f_kr(k, 2, mu_c) / factorial(k)
}
