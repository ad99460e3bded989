//! Deterministic, counter-based random streams.
//!
//! Every random quantity in this crate is a pure function of a 64-bit seed
//! and a position in the stream, so runs are reproducible bit for bit across
//! platforms, thread counts, and reimplementations in other languages. The
//! generator is the SplitMix64 output function applied to
//! `seed + (index + 1) * GOLDEN`; normal variates come from the inverse
//! normal CDF (Wichura's AS 241, double-precision branch) applied to the
//! uniform stream.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `index`-th raw output of the stream keyed by `seed`.
#[inline]
pub fn value_at(seed: u64, index: u64) -> u64 {
    mix(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN)))
}

/// The `index`-th uniform variate in `[0, 1)` of the stream keyed by `seed`.
#[inline]
pub fn unit_at(seed: u64, index: u64) -> f64 {
    (value_at(seed, index) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// A cursor over one seeded stream.
#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    index: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, index: 0 }
    }

    pub fn next_u64(&mut self) -> u64 {
        let v = value_at(self.seed, self.index);
        self.index += 1;
        v
    }

    /// Next uniform variate in `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        let v = unit_at(self.seed, self.index);
        self.index += 1;
        v
    }

    /// Next uniform variate in `[lo, hi)`.
    pub fn next_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + self.next_unit() * (hi - lo)
    }

    /// Next standard normal variate via the inverse CDF.
    pub fn next_normal(&mut self) -> f64 {
        // Map [0,1) to (0,1); u = 0 would send the quantile to -inf.
        let u = self.next_unit().max(f64::MIN_POSITIVE);
        inverse_normal_cdf(u)
    }
}

/// Derives an independent stream seed from a master seed and a list of
/// context parts (FNV-1a over the parts' byte encodings).
pub fn derive_seed(master: u64, parts: &[SeedPart<'_>]) -> u64 {
    const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
    const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;
    let mut h = FNV_OFFSET;
    let mut eat = |bytes: &[u8]| {
        for &b in bytes {
            h ^= b as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    };
    eat(&master.to_le_bytes());
    for part in parts {
        match part {
            SeedPart::Str(s) => {
                eat(&(s.len() as u64).to_le_bytes());
                eat(s.as_bytes());
            }
            SeedPart::U64(v) => eat(&v.to_le_bytes()),
            SeedPart::F64(v) => eat(&v.to_bits().to_le_bytes()),
        }
    }
    // Final avalanche so nearby contexts do not give nearby seeds.
    mix(h)
}

/// One component of a derived-seed context.
#[derive(Debug, Clone, Copy)]
pub enum SeedPart<'a> {
    Str(&'a str),
    U64(u64),
    F64(f64),
}

/// Inverse of the standard normal CDF for `p` in `(0, 1)`.
///
/// Wichura's algorithm AS 241, PPND16: three rational approximations on
/// `|p - 0.5| <= 0.425`, on the near tail, and on the far tail. Absolute
/// error is below 1e-15 over the full open interval.
#[allow(clippy::excessive_precision)] // coefficients as published
pub fn inverse_normal_cdf(p: f64) -> f64 {
    debug_assert!(p > 0.0 && p < 1.0);
    const A: [f64; 8] = [
        3.387_132_872_796_366_608,
        1.331_416_678_917_843_774_5e2,
        1.971_590_950_306_551_442_7e3,
        1.373_169_376_550_946_112_5e4,
        4.592_195_393_154_987_145_7e4,
        6.726_577_092_700_870_085_3e4,
        3.343_057_558_358_812_810_5e4,
        2.509_080_928_730_122_672_7e3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.231_333_070_160_091_125_2e1,
        6.871_870_074_920_579_083e2,
        5.394_196_021_424_751_107_7e3,
        2.121_379_430_158_659_586_7e4,
        3.930_789_580_009_271_061e4,
        2.872_908_573_572_194_267_4e4,
        5.226_495_278_852_854_561e3,
    ];
    const C: [f64; 8] = [
        1.423_437_110_749_683_577_34,
        4.630_337_846_156_545_295_9,
        5.769_497_221_460_691_405_5,
        3.647_848_324_763_204_605_04,
        1.270_458_252_452_368_382_58,
        2.417_807_251_774_506_117_7e-1,
        2.272_384_498_926_918_458_33e-2,
        7.745_450_142_783_414_076_4e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.053_191_626_637_758_821_87,
        1.676_384_830_183_803_849_4,
        6.897_673_349_851_000_045_5e-1,
        1.481_039_764_274_800_745_9e-1,
        1.519_866_656_361_645_719_66e-2,
        5.475_938_084_995_344_946e-4,
        1.050_750_071_644_416_843_24e-9,
    ];
    const E: [f64; 8] = [
        6.657_904_643_501_103_777_2,
        5.463_784_911_164_114_369_9,
        1.784_826_539_917_291_335_8,
        2.965_605_718_285_048_912_3e-1,
        2.653_218_952_657_612_309_3e-2,
        1.242_660_947_388_078_438_6e-3,
        2.711_555_568_743_487_578_15e-5,
        2.010_334_399_292_288_132_65e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.998_322_065_558_879_376_9e-1,
        1.369_298_809_227_358_053_1e-1,
        1.487_536_129_085_061_485_25e-2,
        7.868_691_311_456_132_591e-4,
        1.846_318_317_510_054_681_8e-5,
        1.421_511_758_316_445_888_7e-7,
        2.044_263_103_389_939_785_64e-15,
    ];

    #[inline]
    fn rational(r: f64, num: &[f64; 8], den: &[f64; 8]) -> f64 {
        let mut n = num[7];
        let mut d = den[7];
        for k in (0..7).rev() {
            n = n * r + num[k];
            d = d * r + den[k];
        }
        n / d
    }

    let q = p - 0.5;
    if q.abs() <= 0.425 {
        let r = 0.180625 - q * q;
        return q * rational(r, &A, &B);
    }
    let r = if q < 0.0 { p } else { 1.0 - p };
    let r = (-r.ln()).sqrt();
    let value = if r <= 5.0 {
        rational(r - 1.6, &C, &D)
    } else {
        rational(r - 5.0, &E, &F)
    };
    if q < 0.0 {
        -value
    } else {
        value
    }
}
