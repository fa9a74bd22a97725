#![allow(clippy::excessive_precision)]

use super::QuadValue;
#[allow(unused_imports)]
use num_traits::Float;

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

pub(crate) struct Panel<T> {
    pub value: T,
    pub error: f64,
    /// Largest `|f|` seen on the right half of the panel.
    pub right_peak: f64,
}

pub(crate) const EVALUATIONS: usize = 21;

pub(crate) fn gk21<T, F>(f: &mut F, a: f64, b: f64) -> crate::Result<Panel<T>>
where
    T: QuadValue,
    F: FnMut(f64) -> crate::Result<T>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let f_center = f(center)?;
    let mut kronrod = f_center.scale(WGK[10]);
    let mut gauss = T::zero();
    let mut res_abs = WGK[10] * f_center.norm();
    let mut right_peak = f_center.norm();

    let mut lower = [T::zero(); 10];
    let mut upper = [T::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let fl = f(center - dx)?;
        let fu = f(center + dx)?;
        lower[j] = fl;
        upper[j] = fu;
        let sum = fl.add(fu);
        kronrod = kronrod.add(sum.scale(WGK[j]));
        if j % 2 == 1 {
            gauss = gauss.add(sum.scale(WG[j / 2]));
        }
        res_abs += WGK[j] * (fl.norm() + fu.norm());
        right_peak = right_peak.max(fu.norm());
    }

    let mean = kronrod.scale(0.5);
    let mut res_asc = WGK[10] * f_center.sub(mean).norm();
    for j in 0..10 {
        res_asc += WGK[j] * (lower[j].sub(mean).norm() + upper[j].sub(mean).norm());
    }

    let width = half.abs();
    let mut error = kronrod.sub(gauss).norm() * width;
    let res_abs = res_abs * width;
    let res_asc = res_asc * width;
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    if !error.is_finite() || !kronrod.norm().is_finite() {
        error = f64::INFINITY;
    }

    Ok(Panel { value: kronrod.scale(half), error, right_peak })
}
