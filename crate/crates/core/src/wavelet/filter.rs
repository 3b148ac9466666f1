//! Daubechies scaling filters.
//!
//! Taps are embedded as constants produced offline by spectral factorization
//! of the Daubechies polynomial in 60-digit arithmetic, oriented like the
//! classic tables (`h[0] = 0.48296...` for order 4) and normalized so that
//! `sum h = sqrt(2)`, `sum h^2 = 1`.

use crate::error::{Error, Result};
use crate::float::Float;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WaveletFamily {
    Daubechies,
}

/// Orthonormal two-channel filter; `order` taps, `order/2` vanishing moments.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilter<T: Float> {
    h: Vec<T>,
}

const DAUB2: [f64; 2] = [0.7071067811865475244, 0.7071067811865475244];
const DAUB4: [f64; 4] = [
    0.4829629131445341434,
    0.8365163037378079056,
    0.2241438680420133810,
    -0.1294095225512603812,
];
const DAUB6: [f64; 6] = [
    0.3326705529500826160,
    0.8068915093110925765,
    0.4598775021184915701,
    -0.1350110200102545887,
    -0.08544127388202666169,
    0.03522629188570953660,
];
const DAUB8: [f64; 8] = [
    0.2303778133088965009,
    0.7148465705529156471,
    0.6308807679298589079,
    -0.02798376941685985421,
    -0.1870348117190930841,
    0.03084138183556076363,
    0.03288301166688519974,
    -0.01059740178506903210,
];
const DAUB10: [f64; 10] = [
    0.1601023979741929145,
    0.6038292697971896705,
    0.7243085284377729277,
    0.1384281459013207315,
    -0.2422948870663820319,
    -0.03224486958463837465,
    0.07757149384004571352,
    -0.006241490212798274274,
    -0.01258075199908199947,
    0.003335725285473771278,
];
const DAUB12: [f64; 12] = [
    0.1115407433501094636,
    0.4946238903984530857,
    0.7511339080210953507,
    0.3152503517091976291,
    -0.2262646939654398201,
    -0.1297668675672619356,
    0.09750160558732304910,
    0.02752286553030572863,
    -0.03158203931748602957,
    0.0005538422011614961393,
    0.004777257510945510640,
    -0.001077301085308479565,
];
const DAUB14: [f64; 14] = [
    0.07785205408500917902,
    0.3965393194819173065,
    0.7291320908462351199,
    0.4697822874051931225,
    -0.1439060039285649754,
    -0.2240361849938749826,
    0.07130921926683026475,
    0.08061260915108307191,
    -0.03802993693501441358,
    -0.01657454163066688065,
    0.01255099855609984061,
    0.0004295779729213665211,
    -0.001801640704047490915,
    0.0003537137999745202484,
];
const DAUB16: [f64; 16] = [
    0.05441584224310400996,
    0.3128715909142999707,
    0.6756307362972898068,
    0.5853546836542067128,
    -0.01582910525634930567,
    -0.2840155429615469265,
    0.0004724845739132827704,
    0.1287474266204784589,
    -0.01736930100180754617,
    -0.04408825393079475151,
    0.01398102791739828165,
    0.008746094047405776716,
    -0.004870352993451574310,
    -0.0003917403733769470463,
    0.0006754494064505693664,
    -0.0001174767841247695337,
];
const DAUB18: [f64; 18] = [
    0.03807794736387834659,
    0.2438346746125903537,
    0.6048231236901111119,
    0.6572880780513005381,
    0.1331973858250075762,
    -0.2932737832791749088,
    -0.09684078322297646051,
    0.1485407493381063801,
    0.03072568147933337921,
    -0.06763282906132997368,
    0.0002509471148314519576,
    0.02236166212367909721,
    -0.004723204757751397278,
    -0.004281503682463429834,
    0.001847646883056226477,
    0.0002303857635231959672,
    -0.0002519631889427101370,
    0.00003934732031627159948,
];
const DAUB20: [f64; 20] = [
    0.02667005790055555359,
    0.1881768000776914890,
    0.5272011889317255865,
    0.6884590394536035657,
    0.2811723436605774607,
    -0.2498464243273153794,
    -0.1959462743773770435,
    0.1273693403357932601,
    0.09305736460357235116,
    -0.07139414716639708715,
    -0.02945753682187581286,
    0.03321267405934100174,
    0.003606553566956169655,
    -0.01073317548333057504,
    0.001395351747052901166,
    0.001992405295185056117,
    -0.0006858566949597116266,
    -0.0001164668551292854510,
    0.00009358867032006959133,
    -0.00001326420289452124481,
];

fn daubechies_taps(order: usize) -> Option<&'static [f64]> {
    Some(match order {
        2 => &DAUB2,
        4 => &DAUB4,
        6 => &DAUB6,
        8 => &DAUB8,
        10 => &DAUB10,
        12 => &DAUB12,
        14 => &DAUB14,
        16 => &DAUB16,
        18 => &DAUB18,
        20 => &DAUB20,
        _ => return None,
    })
}

/// Scaling (low-pass) filter of the requested family and order (tap count).
/// Order 2 is the Haar filter; order `2M` has `M` vanishing moments.
pub fn scaling_filter<T: Float>(family: WaveletFamily, order: usize) -> Result<WaveletFilter<T>> {
    match family {
        WaveletFamily::Daubechies => {
            let taps = daubechies_taps(order).ok_or_else(|| {
                Error::InvalidParameter(format!(
                    "Daubechies order must be an even number in 2..=20, got {order}"
                ))
            })?;
            Ok(WaveletFilter {
                h: taps.iter().map(|&x| T::cst(x)).collect(),
            })
        }
    }
}

impl<T: Float> WaveletFilter<T> {
    /// Low-pass taps.
    pub fn h(&self) -> &[T] {
        &self.h
    }

    /// High-pass taps by the quadrature-mirror rule `g_m = (-1)^m h_{q-1-m}`.
    pub fn g(&self) -> Vec<T> {
        let q = self.h.len();
        (0..q)
            .map(|m| {
                let v = self.h[q - 1 - m];
                if m % 2 == 0 {
                    v
                } else {
                    -v
                }
            })
            .collect()
    }

    /// Filter length `q`.
    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Number of vanishing moments `M = q/2`.
    pub fn vanishing_moments(&self) -> usize {
        self.h.len() / 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn printed_daub4_taps() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 4).unwrap();
        let expect = [0.4829629, 0.8365163, 0.2241439, -0.1294095];
        for (a, b) in f.h().iter().zip(expect) {
            assert_abs_diff_eq!(a, &b, epsilon = 1e-6);
        }
    }

    #[test]
    fn haar_filter() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 2).unwrap();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        assert_abs_diff_eq!(f.h()[0], r, epsilon = 1e-15);
        assert_abs_diff_eq!(f.h()[1], r, epsilon = 1e-15);
        assert_eq!(f.vanishing_moments(), 1);
    }

    #[test]
    fn normalization_and_orthonormality_all_orders() {
        for order in (2..=20).step_by(2) {
            let f = scaling_filter::<f64>(WaveletFamily::Daubechies, order).unwrap();
            let sum: f64 = f.h().iter().sum();
            let sq: f64 = f.h().iter().map(|x| x * x).sum();
            assert_abs_diff_eq!(sum, std::f64::consts::SQRT_2, epsilon = 1e-10);
            assert_abs_diff_eq!(sq, 1.0, epsilon = 1e-10);
            // orthogonality to even shifts
            for s in 1..order / 2 {
                let dot: f64 = (0..order - 2 * s).map(|k| f.h()[k] * f.h()[k + 2 * s]).sum();
                assert_abs_diff_eq!(dot, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn daub8_vanishing_moment_conditions() {
        let f = scaling_filter::<f64>(WaveletFamily::Daubechies, 8).unwrap();
        let q = f.len();
        for m in 0..4usize {
            let s: f64 = (0..q)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * (k as f64).powi(m as i32) * f.h()[q - 1 - k]
                })
                .sum();
            assert_abs_diff_eq!(s, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn unsupported_orders_rejected() {
        assert!(scaling_filter::<f64>(WaveletFamily::Daubechies, 3).is_err());
        assert!(scaling_filter::<f64>(WaveletFamily::Daubechies, 0).is_err());
        assert!(scaling_filter::<f64>(WaveletFamily::Daubechies, 22).is_err());
    }
}
