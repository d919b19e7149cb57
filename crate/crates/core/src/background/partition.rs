//! Interval algebra on spectra: the parts of multiplicity one and two of a
//! pair of backgrounds and the edge classes used by the inverse problem.

use super::{Background, SpectralBand};

/// Closed interval, `hi = ∞` for an unbounded band.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    fn from_band(b: &SpectralBand) -> Self {
        Self { lo: b.lo, hi: b.hi.unwrap_or(f64::INFINITY) }
    }

    pub fn to_band(self) -> SpectralBand {
        if self.hi.is_infinite() {
            SpectralBand::semi_infinite(self.lo)
        } else {
            SpectralBand::finite(self.lo, self.hi)
        }
    }
}

const TOL: f64 = 1e-12;

fn same(a: f64, b: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= TOL * (1.0 + a.abs().max(b.abs()))
}

/// Sorts, drops zero-length pieces and merges touching intervals.
fn normalize(mut v: Vec<Interval>) -> Vec<Interval> {
    v.retain(|i| i.hi - i.lo > TOL * (1.0 + i.lo.abs()));
    v.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut out: Vec<Interval> = Vec::new();
    for i in v {
        match out.last_mut() {
            Some(last) if i.lo <= last.hi || same(i.lo, last.hi) => last.hi = last.hi.max(i.hi),
            _ => out.push(i),
        }
    }
    out
}

fn intersect(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut v = Vec::new();
    for x in a {
        for y in b {
            v.push(Interval { lo: x.lo.max(y.lo), hi: x.hi.min(y.hi) });
        }
    }
    normalize(v)
}

fn subtract(a: &[Interval], b: &[Interval]) -> Vec<Interval> {
    let mut pieces = a.to_vec();
    for y in b {
        let mut next = Vec::new();
        for x in pieces {
            if y.hi <= x.lo || y.lo >= x.hi {
                next.push(x);
                continue;
            }
            next.push(Interval { lo: x.lo, hi: y.lo.max(x.lo) });
            next.push(Interval { lo: y.hi.min(x.hi), hi: x.hi });
        }
        pieces = next;
    }
    normalize(pieces)
}

fn boundary(v: &[Interval]) -> Vec<f64> {
    let mut e = Vec::new();
    for i in v {
        e.push(i.lo);
        if i.hi.is_finite() {
            e.push(i.hi);
        }
    }
    e
}

fn interior(v: &[Interval], x: f64) -> bool {
    v.iter().any(|i| x > i.lo && x < i.hi && !same(x, i.lo) && !same(x, i.hi))
}

fn meet(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().copied().filter(|x| b.iter().any(|y| same(*x, *y))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    pub sigma_plus: Vec<Interval>,
    pub sigma_minus: Vec<Interval>,
    /// Spectrum of multiplicity two.
    pub sigma2: Vec<Interval>,
    /// Spectrum of multiplicity one coming from the plus/minus background.
    pub sigma1_plus: Vec<Interval>,
    pub sigma1_minus: Vec<Interval>,
    pub sigma: Vec<Interval>,
    pub omega1_plus: Vec<f64>,
    pub omega1_minus: Vec<f64>,
    pub omega2_plus: Vec<f64>,
    pub omega2_minus: Vec<f64>,
    pub omega3: Vec<f64>,
}

impl Partition {
    pub fn from_bands(minus: &[SpectralBand], plus: &[SpectralBand]) -> Self {
        let sm = normalize(minus.iter().map(Interval::from_band).collect());
        let sp = normalize(plus.iter().map(Interval::from_band).collect());
        let sigma2 = intersect(&sp, &sm);
        let sigma1_plus = subtract(&sp, &sigma2);
        let sigma1_minus = subtract(&sm, &sigma2);
        let sigma = normalize(sp.iter().chain(&sm).copied().collect());
        let d2 = boundary(&sigma2);
        let ds = boundary(&sigma);
        let omega1_plus = d2.iter().copied().filter(|&e| interior(&sm, e)).collect();
        let omega1_minus = d2.iter().copied().filter(|&e| interior(&sp, e)).collect();
        let omega2_plus = meet(&boundary(&sigma1_plus), &ds);
        let omega2_minus = meet(&boundary(&sigma1_minus), &ds);
        let omega3 = meet(&boundary(&sm), &boundary(&sp));
        Self { sigma_plus: sp, sigma_minus: sm, sigma2, sigma1_plus, sigma1_minus, sigma, omega1_plus, omega1_minus, omega2_plus, omega2_minus, omega3 }
    }

    pub fn new(minus: &Background, plus: &Background) -> Self {
        Self::from_bands(&minus.bands, &plus.bands)
    }

    pub fn sigma1(&self, plus: bool) -> &[Interval] {
        if plus {
            &self.sigma1_plus
        } else {
            &self.sigma1_minus
        }
    }

    pub fn in_sigma(&self, x: f64) -> bool {
        self.sigma.iter().any(|i| x >= i.lo && x <= i.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval { lo, hi }
    }

    #[test]
    fn two_background_example() {
        let plus = [SpectralBand::finite(0.0, 1.0), SpectralBand::semi_infinite(3.0)];
        let minus = [SpectralBand::finite(0.0, 1.0), SpectralBand::finite(2.0, 3.0), SpectralBand::semi_infinite(4.0)];
        let p = Partition::from_bands(&minus, &plus);
        let inf = f64::INFINITY;
        assert_eq!(p.sigma, vec![iv(0.0, 1.0), iv(2.0, inf)]);
        assert_eq!(p.sigma1_plus, vec![iv(3.0, 4.0)]);
        assert_eq!(p.sigma1_minus, vec![iv(2.0, 3.0)]);
        assert_eq!(p.sigma2, vec![iv(0.0, 1.0), iv(4.0, inf)]);
        assert!(p.omega1_plus.is_empty());
        assert_eq!(p.omega1_minus, vec![4.0]);
        assert!(p.omega2_plus.is_empty());
        assert_eq!(p.omega2_minus, vec![2.0]);
        assert_eq!(p.omega3, vec![0.0, 1.0, 3.0]);
    }

    #[test]
    fn identical_backgrounds() {
        let b = [SpectralBand::finite(0.5, 1.0), SpectralBand::semi_infinite(1.5)];
        let p = Partition::from_bands(&b, &b);
        assert_eq!(p.sigma2, p.sigma_plus);
        assert!(p.sigma1_plus.is_empty() && p.sigma1_minus.is_empty());
    }

    #[test]
    fn steplike_constants() {
        let p = Partition::from_bands(&[SpectralBand::semi_infinite(1.0)], &[SpectralBand::semi_infinite(0.0)]);
        assert_eq!(p.sigma1_plus, vec![iv(0.0, 1.0)]);
        assert_eq!(p.sigma2, vec![iv(1.0, f64::INFINITY)]);
        assert!(p.sigma1_minus.is_empty());
        assert_eq!(p.omega1_minus, vec![1.0]);
        assert_eq!(p.omega2_plus, vec![0.0]);
    }
}
