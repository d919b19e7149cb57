//! Gauss-type rules on spectral bands, including square-root endpoint
//! behaviour of band weights.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Endpoint behaviour the rule is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Singularity {
    /// Smooth integrand, plain measure.
    None,
    /// Weight `1/sqrt(λ - a)`.
    InvSqrtLeft,
    /// Weight `1/sqrt(b - λ)`.
    InvSqrtRight,
    /// Weight `1/sqrt((λ - a)(b - λ))` (Chebyshev–Gauss).
    InvSqrtBoth,
    /// Plain measure, integrand smooth in `sqrt(λ - a)` and `sqrt(b - λ)`
    /// (possibly with inverse square-root blow-up). Uses `λ = a + (b-a) sin²θ`
    /// on finite bands and `λ = a + s²` on semi-infinite ones.
    SqrtMapped,
}

/// A spectral band `[lo, hi]`, `hi = None` meaning `[lo, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: Option<f64>,
}

impl Band {
    pub fn finite(lo: f64, hi: f64) -> Self {
        Self { lo, hi: Some(hi) }
    }

    pub fn semi_infinite(lo: f64) -> Self {
        Self { lo, hi: None }
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && self.hi.is_none_or(|h| x <= h)
    }

    pub fn is_finite(&self) -> bool {
        self.hi.is_some()
    }
}

/// Nodes and weights such that `Σ wᵢ f(λᵢ) ≈ ∫ f(λ) w(λ) dλ` for the declared
/// weight `w`.
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub singularity: Singularity,
    pub band: Band,
    /// Truncation point for semi-infinite bands.
    pub cutoff: Option<f64>,
    /// Size of the decay-law tail estimate `1/sqrt(cutoff - lo)`; zero for
    /// finite bands.
    pub tail_estimate: f64,
}

impl QuadratureRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 {
                1.0
            } else if n == 1 {
                z
            } else {
                p1
            };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule on `[a, b]` with `panels` equal panels of
/// `m` nodes each.
pub fn composite_gauss(a: f64, b: f64, panels: usize, m: usize) -> (Vec<f64>, Vec<f64>) {
    let (gx, gw) = gauss_legendre(m);
    let h = (b - a) / panels as f64;
    let mut xs = Vec::with_capacity(panels * m);
    let mut ws = Vec::with_capacity(panels * m);
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in gx.iter().zip(&gw) {
            xs.push(lo + 0.5 * h * (x + 1.0));
            ws.push(0.5 * h * w);
        }
    }
    (xs, ws)
}

fn sorted(mut pairs: Vec<(f64, f64)>) -> (Vec<f64>, Vec<f64>) {
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Builds a rule on a band. `n` is the total node count; `cutoff` is required
/// for semi-infinite bands.
pub fn band_quadrature(band: Band, singularity: Singularity, n: usize, cutoff: Option<f64>) -> Result<QuadratureRule> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("band quadrature needs at least 4 nodes, got {n}")));
    }
    let a = band.lo;
    let (nodes, weights, cut, tail) = match band.hi {
        Some(b) => {
            if !(a < b) {
                return Err(Error::InvalidInput(format!("empty band [{a}, {b}]")));
            }
            let len = b - a;
            let (gx, gw) = gauss_legendre(n);
            let pairs: Vec<(f64, f64)> = match singularity {
                Singularity::None => gx.iter().zip(&gw).map(|(x, w)| (a + 0.5 * len * (x + 1.0), 0.5 * len * w)).collect(),
                Singularity::InvSqrtLeft | Singularity::InvSqrtRight => {
                    // λ = a + len s², s ∈ [0, 1]: dλ/sqrt(λ-a) = 2 sqrt(len) ds.
                    gx.iter()
                        .zip(&gw)
                        .map(|(x, w)| {
                            let s = 0.5 * (x + 1.0);
                            let lam = if singularity == Singularity::InvSqrtLeft { a + len * s * s } else { b - len * s * s };
                            (lam, 0.5 * w * 2.0 * len.sqrt())
                        })
                        .collect()
                }
                Singularity::InvSqrtBoth => (1..=n)
                    .map(|j| {
                        let t = (2 * j - 1) as f64 * PI / (2 * n) as f64;
                        (0.5 * (a + b) + 0.5 * len * t.cos(), PI / n as f64)
                    })
                    .collect(),
                Singularity::SqrtMapped => gx
                    .iter()
                    .zip(&gw)
                    .map(|(x, w)| {
                        let th = 0.25 * PI * (x + 1.0);
                        (a + len * th.sin().powi(2), 0.25 * PI * w * len * (2.0 * th).sin())
                    })
                    .collect(),
            };
            let (xs, ws) = sorted(pairs);
            (xs, ws, None, 0.0)
        }
        None => {
            let cutoff = cutoff.ok_or_else(|| Error::InvalidInput("semi-infinite band needs a cutoff".into()))?;
            if !(cutoff > a) {
                return Err(Error::InvalidInput(format!("cutoff {cutoff} must exceed band start {a}")));
            }
            let smax = (cutoff - a).sqrt();
            let (panels, m) = panel_layout(smax, n);
            let (sx, sw) = composite_gauss(0.0, smax, panels, m);
            let pairs: Vec<(f64, f64)> = sx
                .iter()
                .zip(&sw)
                .map(|(&s, &w)| {
                    let lam = a + s * s;
                    let weight = match singularity {
                        Singularity::None | Singularity::SqrtMapped => 2.0 * s * w,
                        Singularity::InvSqrtLeft => 2.0 * w,
                        _ => f64::NAN,
                    };
                    (lam, weight)
                })
                .collect();
            if pairs.iter().any(|p| p.1.is_nan()) {
                return Err(Error::InvalidInput(format!("{singularity:?} weight is undefined on a semi-infinite band")));
            }
            let (xs, ws) = sorted(pairs);
            (xs, ws, Some(cutoff), 1.0 / smax)
        }
    };
    Ok(QuadratureRule { nodes, weights, singularity, band, cutoff: cut, tail_estimate: tail })
}

/// Splits `[0, len]` into unit-ish panels sharing `n` nodes (at least 8 per panel).
pub fn panel_layout(len: f64, n: usize) -> (usize, usize) {
    let panels = (len.ceil() as usize).max(1);
    let m = n.div_ceil(panels).max(8);
    (panels, m)
}

/// Kinds of one-dimensional grids.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GridKind {
    Uniform,
    /// Chebyshev points of the first kind mapped from `[-1, 1]` onto `[a, b]`.
    ChebyshevMapped {
        a: f64,
        b: f64,
    },
}

/// Strictly increasing abscissas.
#[derive(Clone, Debug)]
pub struct RealGrid {
    pub points: Vec<f64>,
    pub kind: GridKind,
}

impl RealGrid {
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(a < b) {
            return Err(Error::InvalidInput(format!("uniform grid needs a < b and n >= 2 (got [{a}, {b}], {n})")));
        }
        let h = (b - a) / (n - 1) as f64;
        let points = (0..n).map(|i| if i == n - 1 { b } else { a + i as f64 * h }).collect();
        Ok(Self { points, kind: GridKind::Uniform })
    }

    pub fn chebyshev(a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 || !(a < b) {
            return Err(Error::InvalidInput(format!("chebyshev grid needs a < b and n >= 2 (got [{a}, {b}], {n})")));
        }
        let points = (0..n)
            .rev()
            .map(|j| {
                let t = (2 * j + 1) as f64 * PI / (2 * n) as f64;
                0.5 * (a + b) + 0.5 * (b - a) * t.cos()
            })
            .collect();
        Ok(Self { points, kind: GridKind::ChebyshevMapped { a, b } })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn beta_moment(k: usize) -> f64 {
        // ∫_0^1 λ^k / sqrt(λ(1-λ)) dλ = B(k + 1/2, 1/2) = π (2k)! / (4^k k!²)
        let mut v = PI;
        for j in 1..=k {
            v *= (2 * j - 1) as f64 / (2 * j) as f64;
        }
        v
    }

    #[test]
    fn arcsine_weight_constant() {
        let r = band_quadrature(Band::finite(0.0, 1.0), Singularity::InvSqrtBoth, 8, None).unwrap();
        assert!((r.integrate(|_| 1.0) - PI).abs() < 1e-14);
    }

    #[test]
    fn plain_linear() {
        let r = band_quadrature(Band::finite(0.0, 1.0), Singularity::None, 4, None).unwrap();
        assert!((r.integrate(|x| x) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn gaussian_on_half_line() {
        let r = band_quadrature(Band::semi_infinite(0.0), Singularity::InvSqrtLeft, 120, Some(60.0)).unwrap();
        assert!((r.integrate(|x| (-x).exp()) - PI.sqrt()).abs() < 1e-8);
        assert!(r.tail_estimate > 0.0);
    }

    #[test]
    fn polynomial_exactness_up_to_degree_eight() {
        for sing in [Singularity::InvSqrtBoth, Singularity::SqrtMapped] {
            let r = band_quadrature(Band::finite(0.0, 1.0), sing, 16, None).unwrap();
            for k in 0..=8 {
                let got = match sing {
                    Singularity::InvSqrtBoth => r.integrate(|x| x.powi(k as i32)),
                    _ => r.integrate(|x| x.powi(k as i32) / (x * (1.0 - x)).sqrt()),
                };
                assert!((got - beta_moment(k)).abs() < 1e-10 * beta_moment(k), "{sing:?} k={k}");
            }
        }
    }

    #[test]
    fn one_sided_weights() {
        let l = band_quadrature(Band::finite(0.0, 1.0), Singularity::InvSqrtLeft, 10, None).unwrap();
        assert!((l.integrate(|x| x) - 2.0 / 3.0).abs() < 1e-13);
        let r = band_quadrature(Band::finite(0.0, 1.0), Singularity::InvSqrtRight, 10, None).unwrap();
        assert!((r.integrate(|x| 1.0 - x) - 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn nodes_stay_inside() {
        for sing in [Singularity::InvSqrtLeft, Singularity::InvSqrtRight, Singularity::InvSqrtBoth, Singularity::SqrtMapped] {
            let r = band_quadrature(Band::finite(-1.0, 2.0), sing, 33, None).unwrap();
            assert!(r.nodes.iter().all(|&x| x > -1.0 && x < 2.0));
            assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn errors() {
        assert!(band_quadrature(Band::semi_infinite(1.0), Singularity::None, 10, Some(0.5)).is_err());
        assert!(band_quadrature(Band::finite(0.0, 1.0), Singularity::None, 3, None).is_err());
    }

    #[test]
    fn self_convergence_under_doubling() {
        let f = |x: f64| (3.0 * x).cos() / (x * (2.0 - x)).sqrt();
        let a = band_quadrature(Band::finite(0.0, 2.0), Singularity::SqrtMapped, 12, None).unwrap().integrate(f);
        let b = band_quadrature(Band::finite(0.0, 2.0), Singularity::SqrtMapped, 24, None).unwrap().integrate(f);
        let c = band_quadrature(Band::finite(0.0, 2.0), Singularity::SqrtMapped, 48, None).unwrap().integrate(f);
        assert!((c - b).abs() <= (b - a).abs() + 1e-15);
    }

    #[test]
    fn grids() {
        let g = RealGrid::chebyshev(0.0, 1.0, 5).unwrap();
        assert!(g.points.windows(2).all(|w| w[0] < w[1]));
        assert!(RealGrid::uniform(1.0, 0.0, 4).is_err());
    }
}
