use super::root::invert_lower_tail;
use super::Probability;
use crate::error::{domain, Result};
use crate::math::{abs, exp, ln, sqrt};

const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_94;
const MAX_EXP_ARG: f64 = 709.782_712_893_384;

// Rational approximations for erf on |x| ≤ 1 and erfc on 1 < x < 8 and x ≥ 8.
const ERFC_P: [f64; 9] = [
    2.461_969_814_735_305_125_24e-10,
    5.641_895_648_310_688_219_77e-1,
    7.463_210_564_422_699_126_87e0,
    4.863_719_709_856_813_666_14e1,
    1.965_208_329_560_770_982_42e2,
    5.264_451_949_954_773_586_31e2,
    9.345_285_271_719_576_075_40e2,
    1.027_551_886_895_157_102_72e3,
    5.575_353_353_693_993_275_26e2,
];
const ERFC_Q: [f64; 8] = [
    1.322_819_511_547_449_925_08e1,
    8.670_721_408_859_897_423_29e1,
    3.549_377_788_878_198_910_62e2,
    9.757_085_017_432_054_897_53e2,
    1.823_909_166_879_097_362_89e3,
    2.246_337_608_187_109_817_92e3,
    1.656_663_091_941_613_501_82e3,
    5.575_353_408_177_276_755_46e2,
];
const ERFC_R: [f64; 6] = [
    5.641_895_835_477_550_739_84e-1,
    1.275_366_707_599_781_044_16e0,
    5.019_050_422_511_804_774_14e0,
    6.160_210_979_930_535_851_95e0,
    7.409_742_699_504_489_391_60e0,
    2.978_866_653_721_002_406_70e0,
];
const ERFC_S: [f64; 6] = [
    2.260_528_632_201_172_765_90e0,
    9.396_035_249_380_014_346_73e0,
    1.204_895_398_080_966_566_05e1,
    1.708_144_507_475_658_972_22e1,
    9.608_968_090_632_858_781_98e0,
    3.369_076_451_000_815_160_50e0,
];
const ERF_T: [f64; 5] = [
    9.604_973_739_870_516_387_49e0,
    9.002_601_972_038_426_892_17e1,
    2.232_005_345_946_843_192_26e3,
    7.003_325_141_128_050_754_73e3,
    5.559_230_130_103_949_627_68e4,
];
const ERF_U: [f64; 5] = [
    3.356_171_416_475_030_996_47e1,
    5.213_579_497_801_526_797_95e2,
    4.594_323_829_709_801_279_87e3,
    2.262_900_006_138_909_342_46e4,
    4.926_739_426_086_359_210_86e4,
];

/// Horner evaluation, coefficients from the highest degree down.
fn polevl(x: f64, coef: &[f64]) -> f64 {
    coef.iter().fold(0.0, |acc, &c| acc * x + c)
}

/// Same as [`polevl`] with an implicit leading coefficient of one.
fn p1evl(x: f64, coef: &[f64]) -> f64 {
    coef.iter().fold(1.0, |acc, &c| acc * x + c)
}

fn erf_small(x: f64) -> f64 {
    let z = x * x;
    x * polevl(z, &ERF_T) / p1evl(z, &ERF_U)
}

/// `erfc(a)` for `a ≥ 1`.
fn erfc_large(a: f64) -> f64 {
    let z = a * a;
    if z > MAX_EXP_ARG {
        return 0.0;
    }
    let e = exp(-z);
    if a < 8.0 {
        e * polevl(a, &ERFC_P) / p1evl(a, &ERFC_Q)
    } else {
        e * polevl(a, &ERFC_R) / p1evl(a, &ERFC_S)
    }
}

/// Unchecked standard normal CDF.
pub(crate) fn phi(x: f64) -> f64 {
    let t = x * core::f64::consts::FRAC_1_SQRT_2;
    let at = abs(t);
    if at < core::f64::consts::FRAC_1_SQRT_2 {
        0.5 + 0.5 * erf_small(t)
    } else if at < 1.0 {
        let tail = 0.5 * (1.0 - erf_small(at));
        if t > 0.0 {
            1.0 - tail
        } else {
            tail
        }
    } else if t > 0.0 {
        1.0 - 0.5 * erfc_large(at)
    } else {
        0.5 * erfc_large(at)
    }
}

/// Standard normal density.
pub fn normal_pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * exp(-0.5 * x * x)
}

/// Standard normal cumulative distribution function.
pub fn normal_cdf(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(domain("normal_cdf argument", x));
    }
    Ok(phi(x))
}

/// Acklam's rational approximation to the lower-tail normal quantile,
/// relative error about 1e-9. Used only as a starting point.
fn acklam_lower(p: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969_683_028_665_376e1,
        2.209_460_984_245_205e2,
        -2.759_285_104_469_687e2,
        1.383_577_518_672_690e2,
        -3.066_479_806_614_716e1,
        2.506_628_277_459_239,
    ];
    const B: [f64; 5] = [
        -5.447_609_879_822_406e1,
        1.615_858_368_580_409e2,
        -1.556_989_798_598_866e2,
        6.680_131_188_771_972e1,
        -1.328_068_155_288_572e1,
    ];
    const C: [f64; 6] = [
        -7.784_894_002_430_293e-3,
        -3.223_964_580_411_365e-1,
        -2.400_758_277_161_838,
        -2.549_732_539_343_734,
        4.374_664_141_464_968,
        2.938_163_982_698_783,
    ];
    const D: [f64; 4] = [
        7.784_695_709_041_462e-3,
        3.224_671_290_700_398e-1,
        2.445_134_137_142_996,
        3.754_408_661_907_416,
    ];
    const P_LOW: f64 = 0.024_25;

    if p < P_LOW {
        let q = sqrt(-2.0 * ln(p));
        polevl(q, &C) / (polevl(q, &D) * q + 1.0)
    } else {
        let q = p - 0.5;
        let r = q * q;
        polevl(r, &A) * q / (polevl(r, &B) * r + 1.0)
    }
}

/// Standard normal quantile.
///
/// The smaller tail `min(p, 1 - p)` is inverted, so the result satisfies
/// `normal_quantile(p) == -normal_quantile(1 - p)` exactly for `p ≥ 0.5`.
pub fn normal_quantile(p: Probability) -> f64 {
    let p = p.value();
    let (tail, upper) = if p > 0.5 { (1.0 - p, true) } else { (p, false) };
    let x = invert_lower_tail(tail, acklam_lower(tail), phi, normal_pdf);
    if upper {
        -x
    } else {
        x
    }
}
