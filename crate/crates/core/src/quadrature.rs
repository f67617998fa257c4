//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands.
//!
//! A 21-point Kronrod rule with its embedded 10-point Gauss rule gives the
//! local error estimate. The interval with the largest estimate is bisected
//! until the summed estimate meets the tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_600_525_453,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

/// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Result of an integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

/// Tolerances and limits for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integrator {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for Integrator {
    fn default() -> Self {
        Integrator {
            abs_tol: 1e-8,
            rel_tol: 1e-6,
            max_intervals: 200_000,
        }
    }
}

struct Segment {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then(other.a.total_cmp(&self.a))
    }
}

fn kronrod<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[10];
    let mut g = Complex64::new(0.0, 0.0);
    for j in 0..10 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    Segment {
        a,
        b,
        value: k * h,
        error: ((k - g) * h).norm(),
    }
}

impl Integrator {
    pub fn new(abs_tol: f64, rel_tol: f64) -> Self {
        Integrator {
            abs_tol,
            rel_tol,
            ..Default::default()
        }
    }

    /// Integrates `f` over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> Complex64>(&self, f: F, a: f64, b: f64) -> Result<Estimate> {
        self.integrate_breaks(f, &[a, b])
    }

    /// Integrates a real function over `[a, b]`.
    pub fn integrate_real<F: FnMut(f64) -> f64>(&self, mut f: F, a: f64, b: f64) -> Result<f64> {
        self.integrate(|x| Complex64::new(f(x), 0.0), a, b)
            .map(|e| e.value.re)
    }

    /// Integrates over `[breaks[0], breaks[last]]`, starting from the given
    /// subintervals. Useful for oscillatory integrands.
    pub fn integrate_breaks<F: FnMut(f64) -> Complex64>(
        &self,
        mut f: F,
        breaks: &[f64],
    ) -> Result<Estimate> {
        if breaks.len() < 2 {
            return Err(Error::Domain("integration needs at least two breakpoints".into()));
        }
        let mut heap = BinaryHeap::with_capacity(breaks.len());
        let mut total = Complex64::new(0.0, 0.0);
        let mut err = 0.0;
        for w in breaks.windows(2) {
            let s = kronrod(&mut f, w[0], w[1]);
            total += s.value;
            err += s.error;
            heap.push(s);
        }
        let mut evaluations = 21 * (breaks.len() - 1);
        let mut bisections = 0usize;
        loop {
            if !(err.is_finite() && total.norm().is_finite()) {
                return Err(Error::Numerical {
                    message: "integrand is not finite".into(),
                    achieved: err,
                });
            }
            if err <= self.abs_tol.max(self.rel_tol * total.norm()) {
                return Ok(Estimate {
                    value: total,
                    error: err,
                    evaluations,
                });
            }
            if heap.len() >= self.max_intervals {
                return Err(Error::Numerical {
                    message: format!("interval limit {} reached", self.max_intervals),
                    achieved: err,
                });
            }
            let worst = heap.pop().expect("non-empty heap");
            let mid = 0.5 * (worst.a + worst.b);
            if mid <= worst.a || mid >= worst.b {
                return Err(Error::Numerical {
                    message: "interval cannot be subdivided further".into(),
                    achieved: err,
                });
            }
            let left = kronrod(&mut f, worst.a, mid);
            let right = kronrod(&mut f, mid, worst.b);
            evaluations += 42;
            bisections += 1;
            total += left.value + right.value - worst.value;
            err += left.error + right.error - worst.error;
            heap.push(left);
            heap.push(right);
            // Resum from scratch now and then to limit rounding drift.
            if bisections.is_multiple_of(1024) {
                total = heap.iter().map(|s| s.value).sum();
                err = heap.iter().map(|s| s.error).sum();
            }
        }
    }

    /// Two-dimensional integral by nesting 1-D rules; the inner integral is
    /// over `y` in `[c, d]`.
    pub fn integrate_2d<F: FnMut(f64, f64) -> Complex64>(
        &self,
        mut f: F,
        (a, b): (f64, f64),
        (c, d): (f64, f64),
    ) -> Result<Complex64> {
        let inner = Integrator {
            abs_tol: self.abs_tol * 1e-2,
            rel_tol: self.rel_tol * 1e-2,
            ..*self
        };
        let mut failure = None;
        let est = self.integrate(
            |x| match inner.integrate(|y| f(x, y), c, d) {
                Ok(e) => e.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            },
            a,
            b,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(est.value),
        }
    }
}

/// Evenly spaced breakpoints: `n` panels over `[a, b]`.
pub fn panels(a: f64, b: f64, n: usize) -> Vec<f64> {
    let n = n.max(1);
    (0..=n)
        .map(|i| if i == n { b } else { a + (b - a) * i as f64 / n as f64 })
        .collect()
}

/// Fixed-order composite rule: `n` panels of 21-point Kronrod on `[a, b]`.
/// Returns nodes and weights.
pub fn composite_rule(a: f64, b: f64, n: usize) -> Vec<(f64, f64)> {
    let edges = panels(a, b, n);
    let mut out = Vec::with_capacity(21 * n);
    for w in edges.windows(2) {
        let c = 0.5 * (w[0] + w[1]);
        let h = 0.5 * (w[1] - w[0]);
        out.push((c, h * WGK[10]));
        for j in 0..10 {
            out.push((c - h * XGK[j], h * WGK[j]));
            out.push((c + h * XGK[j], h * WGK[j]));
        }
    }
    out
}
