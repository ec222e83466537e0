//! Globally adaptive Gauss-Kronrod quadrature and Cauchy principal values.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (non-negative half) and weights, with the
// embedded 7-point Gauss weights on the odd-indexed nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const MAX_SUBDIVISIONS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error.total_cmp(&other.error)
    }
}

fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrate `f` over `[a, b]` until the summed error estimate falls below
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Quadrature> {
    integrate_with_breaks(f, a, b, &[], rel_tol, abs_tol)
}

/// Like [`integrate`], seeding the subdivision with interior `breaks`
/// (points where `f` has kinks). Breaks outside `(a, b)` are ignored.
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    rel_tol: f64,
    abs_tol: f64,
) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature { value: 0.0, error: 0.0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain("quadrature limits must be finite".into()));
    }
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let sign = if a < b { 1.0 } else { -1.0 };
    let mut nodes: Vec<f64> = breaks.iter().cloned().filter(|&x| x > lo && x < hi).collect();
    nodes.push(lo);
    nodes.push(hi);
    nodes.sort_by(f64::total_cmp);
    nodes.dedup();

    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (0.0, 0.0);
    for w in nodes.windows(2) {
        let seg = kronrod15(&f, w[0], w[1]);
        total += seg.value;
        err += seg.error;
        heap.push(seg);
    }
    let max_segments = MAX_SUBDIVISIONS + 4 * heap.len();
    while err > abs_tol.max(rel_tol * total.abs()) {
        if !total.is_finite() || heap.len() >= max_segments {
            return Err(Error::Quadrature {
                estimate: sign * total,
                residual: err,
            });
        }
        let worst = heap.pop().expect("heap holds every live segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval can no longer be split in floating point
            return Err(Error::Quadrature {
                estimate: sign * total,
                residual: err,
            });
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    // re-sum to shed the drift of the running updates
    let (value, error) = heap
        .iter()
        .fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
    if !(value.is_finite() && error.is_finite()) {
        return Err(Error::Quadrature {
            estimate: sign * value,
            residual: error,
        });
    }
    Ok(Quadrature {
        value: sign * value,
        error,
    })
}

/// Cauchy principal value `⨍₀^cutoff f(ε)/(ε − pole) dε`.
///
/// Accuracy is relative to the summed magnitude of the pieces, so a
/// value that cancels to near zero is still resolved to `rel_tol` of that.
///
/// A symmetric window `(pole − w, pole + w)` with `w = min(pole, cutoff − pole)/2`
/// is folded onto `(0, w)`, where `(f(pole + x) − f(pole − x))/x` is regular;
/// the two outer pieces are ordinary integrals.
pub fn pv_integral<F: Fn(f64) -> f64>(f: F, pole: f64, cutoff: f64, rel_tol: f64) -> Result<Quadrature> {
    pv_integral_with_breaks(f, pole, cutoff, &[], rel_tol)
}

/// [`pv_integral`] for numerators with kinks at `breaks`.
pub fn pv_integral_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    pole: f64,
    cutoff: f64,
    breaks: &[f64],
    rel_tol: f64,
) -> Result<Quadrature> {
    if !(pole > 0.0 && pole < cutoff) {
        return Err(Error::Domain(format!(
            "pole {pole} must lie strictly inside (0, {cutoff})"
        )));
    }
    let w = 0.5 * pole.min(cutoff - pole);
    let folded = |x: f64| (f(pole + x) - f(pole - x)) / x;
    let outer = |e: f64| f(e) / (e - pole);

    // tolerances are set relative to the magnitude of each piece; a shared
    // absolute floor keeps cancelling pieces from demanding impossible accuracy
    let folded_breaks: Vec<f64> = breaks.iter().map(|b| (b - pole).abs()).collect();
    let pieces = |rel: f64, abs: f64| {
        [
            integrate_with_breaks(outer, 0.0, pole - w, breaks, rel, abs),
            integrate_with_breaks(folded, 0.0, w, &folded_breaks, rel, abs),
            integrate_with_breaks(outer, pole + w, cutoff, breaks, rel, abs),
        ]
    };
    let rough: f64 = pieces(1e-6, 0.0)
        .iter()
        .map(|q| q.as_ref().map(|q| q.value.abs()).unwrap_or(0.0))
        .sum();
    let scale = rough.max(1e-300);

    let [lower, window, upper] = pieces(0.1 * rel_tol, 0.03 * rel_tol * scale);
    let (lower, window, upper) = (lower?, window?, upper?);
    let value = lower.value + window.value + upper.value;
    let error = lower.error + window.error + upper.error;
    if error > rel_tol * value.abs().max(scale) {
        return Err(Error::Quadrature {
            estimate: value,
            residual: error,
        });
    }
    Ok(Quadrature { value, error })
}
