//! Closed-form parameters of coded caching schemes, exact throughout.
//!
//! Every scheme is described by `(K, M/N, F, R)` and its coded caching gain
//! `g = K (1 - M/N) / R`. The three union-construction schemes can also be
//! materialized as arrays through [`scheme_build`].

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::{binomial, Integer};
use num_rational::BigRational;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::array::PdaArray;
use crate::construct::{
    construct_pmt, g2_base_pda, mn_pda, transform_to_base, transpose_pda, BuildOptions,
    ConstructError,
};
use crate::verify::verify_pda;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeError {
    #[error("invalid parameters: {0}")]
    InvalidRange(String),
    #[error("{0} has no array construction here")]
    NotBuildable(String),
    #[error("built array disagrees with the closed form: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Construct(#[from] ConstructError),
}

/// `(K, M/N, F, R, g)` of a scheme. `gain` is `None` when `R = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeParams {
    pub users: BigUint,
    pub memory_ratio: BigRational,
    pub subpacketization: BigUint,
    pub load: BigRational,
    pub gain: Option<BigRational>,
}

impl SchemeParams {
    pub fn new(users: BigUint, memory_ratio: BigRational, subpacketization: BigUint, load: BigRational) -> Self {
        let gain = (!load.is_zero())
            .then(|| rat(users.clone()) * (BigRational::one() - &memory_ratio) / &load);
        Self { users, memory_ratio, subpacketization, load, gain }
    }
}

/// A scheme together with its defining parameters, one variant per row of the
/// comparison table. `Cksm1` is the product-form row and `Cksm2` the
/// Gaussian-binomial row of the same family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum BaselineSpec {
    Mn { k: u64, t: u64 },
    Grouping { k: u64, q: u64, z: u64 },
    Wclc { m: u64, t: u64, q: u64, z: u64 },
    Wcwc { m: u64, q: u64, z: u64 },
    Ytcc { h: u64, a: u64, b: u64, r: u64 },
    Cksm1 { p: u64, k: u64, t: u64, m: u64 },
    Cksm2 { p: u64, k: u64, t: u64, m: u64 },
    SchemeA { m: u64, t: u64, q: u64, z: u64 },
    SchemeB { m: u64, t: u64, q: u64, z: u64 },
    SchemeC { m: u64, t: u64, q: u64 },
}

impl BaselineSpec {
    pub const NAMES: [&'static str; 10] =
        ["mn", "grouping", "wclc", "wcwc", "ytcc", "cksm1", "cksm2", "a", "b", "c"];

    /// Builds a spec from a short name and its positional arguments, in the
    /// order the variant lists them.
    pub fn from_args(name: &str, args: &[u64]) -> Result<Self, SchemeError> {
        let need = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(SchemeError::InvalidRange(format!("{name} takes {n} arguments, got {}", args.len())))
            }
        };
        let spec = match name.to_ascii_lowercase().as_str() {
            "mn" => {
                need(2)?;
                Self::Mn { k: args[0], t: args[1] }
            }
            "grouping" => {
                need(3)?;
                Self::Grouping { k: args[0], q: args[1], z: args[2] }
            }
            "wclc" => {
                need(4)?;
                Self::Wclc { m: args[0], t: args[1], q: args[2], z: args[3] }
            }
            "wcwc" => {
                need(3)?;
                Self::Wcwc { m: args[0], q: args[1], z: args[2] }
            }
            "ytcc" => {
                need(4)?;
                Self::Ytcc { h: args[0], a: args[1], b: args[2], r: args[3] }
            }
            "cksm1" => {
                need(4)?;
                Self::Cksm1 { p: args[0], k: args[1], t: args[2], m: args[3] }
            }
            "cksm2" => {
                need(4)?;
                Self::Cksm2 { p: args[0], k: args[1], t: args[2], m: args[3] }
            }
            "a" => {
                need(4)?;
                Self::SchemeA { m: args[0], t: args[1], q: args[2], z: args[3] }
            }
            "b" => {
                need(4)?;
                Self::SchemeB { m: args[0], t: args[1], q: args[2], z: args[3] }
            }
            "c" => {
                need(3)?;
                Self::SchemeC { m: args[0], t: args[1], q: args[2] }
            }
            other => return Err(SchemeError::InvalidRange(format!("unknown scheme {other:?}"))),
        };
        Ok(spec)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Mn { .. } => "mn",
            Self::Grouping { .. } => "grouping",
            Self::Wclc { .. } => "wclc",
            Self::Wcwc { .. } => "wcwc",
            Self::Ytcc { .. } => "ytcc",
            Self::Cksm1 { .. } => "cksm1",
            Self::Cksm2 { .. } => "cksm2",
            Self::SchemeA { .. } => "a",
            Self::SchemeB { .. } => "b",
            Self::SchemeC { .. } => "c",
        }
    }

    pub fn args(&self) -> Vec<u64> {
        match *self {
            Self::Mn { k, t } => vec![k, t],
            Self::Grouping { k, q, z } => vec![k, q, z],
            Self::Wclc { m, t, q, z } | Self::SchemeA { m, t, q, z } | Self::SchemeB { m, t, q, z } => {
                vec![m, t, q, z]
            }
            Self::Wcwc { m, q, z } => vec![m, q, z],
            Self::Ytcc { h, a, b, r } => vec![h, a, b, r],
            Self::Cksm1 { p, k, t, m } | Self::Cksm2 { p, k, t, m } => vec![p, k, t, m],
            Self::SchemeC { m, t, q } => vec![m, t, q],
        }
    }
}

impl fmt::Display for BaselineSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args().iter().map(u64::to_string).collect();
        write!(f, "{}({})", self.name(), args.join(","))
    }
}

fn big(n: u64) -> BigUint {
    BigUint::from(n)
}

fn rat(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn frac(num: BigUint, den: BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn choose(n: u64, k: u64) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        binomial(big(n), big(k))
    }
}

fn pow(base: u64, exp: u64) -> BigUint {
    Pow::pow(big(base), exp as u32)
}

fn factorial(n: u64) -> BigUint {
    (1..=n).map(big).product()
}

fn exp32(e: u64) -> Result<u32, SchemeError> {
    u32::try_from(e).map_err(|_| SchemeError::InvalidRange(format!("exponent {e} too large")))
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), SchemeError> {
    if cond {
        Ok(())
    } else {
        Err(SchemeError::InvalidRange(what()))
    }
}

/// Gaussian binomial coefficient `[k, t]_p`.
pub fn gaussian_binomial(k: u64, t: u64, p: u64) -> BigUint {
    if t > k {
        return BigUint::zero();
    }
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..t {
        num *= pow(p, k - i) - 1u32;
        den *= pow(p, t - i) - 1u32;
    }
    num / den
}

fn is_prime_power(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut n = p;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            while n.is_multiple_of(d) {
                n /= d;
            }
            return n == 1;
        }
        d += 1;
    }
    true
}

fn check_mtqz(m: u64, t: u64, q: u64, z: u64) -> Result<(), SchemeError> {
    ensure(z >= 1 && z < q, || format!("need 1 <= z < q, got q={q}, z={z}"))?;
    ensure(t >= 1 && t <= m, || format!("need 1 <= t <= m, got m={m}, t={t}"))?;
    exp32(m).map(|_| ())
}

/// `K = C(m,t) q^t`, `M/N = 1 - ((q-z)/q)^t`, `F = z^t C(q,z)^m`,
/// `R = ((q-z)/z)^t`, `g = C(m,t) z^t`.
pub fn scheme_a_params(m: u64, t: u64, q: u64, z: u64) -> Result<SchemeParams, SchemeError> {
    check_mtqz(m, t, q, z)?;
    let k = choose(m, t) * pow(q, t);
    let memory = BigRational::one() - Pow::pow(frac(big(q - z), big(q)), t as u32);
    let f = pow(z, t) * Pow::pow(choose(q, z), m as u32);
    let r = Pow::pow(frac(big(q - z), big(z)), t as u32);
    Ok(SchemeParams::new(k, memory, f, r))
}

/// `K = C(m,t) C(q,z)^t`, `M/N = 1 - ((q-z)/q)^t`, `F = z^t q^m`,
/// `R = C(q-1,z)^t / z^t`.
pub fn scheme_b_params(m: u64, t: u64, q: u64, z: u64) -> Result<SchemeParams, SchemeError> {
    check_mtqz(m, t, q, z)?;
    let k = choose(m, t) * Pow::pow(choose(q, z), t as u32);
    let memory = BigRational::one() - Pow::pow(frac(big(q - z), big(q)), t as u32);
    let f = pow(z, t) * pow(q, m);
    let r = Pow::pow(frac(choose(q - 1, z), big(z)), t as u32);
    Ok(SchemeParams::new(k, memory, f, r))
}

/// `K = C(m,t) q^(2t)`, `M/N = 1 - ((q-1)/q)^t`, `F = (2q)^m`,
/// `R = ((q-1) q / 2)^t`.
pub fn scheme_c_params(m: u64, t: u64, q: u64) -> Result<SchemeParams, SchemeError> {
    ensure(q >= 2, || format!("need q >= 2, got {q}"))?;
    ensure(t >= 1 && t <= m, || format!("need 1 <= t <= m, got m={m}, t={t}"))?;
    exp32(m)?;
    let k = choose(m, t) * pow(q, 2 * t);
    let memory = BigRational::one() - Pow::pow(frac(big(q - 1), big(q)), t as u32);
    let f = pow(2 * q, m);
    let r = Pow::pow(frac(big((q - 1) * q), big(2)), t as u32);
    Ok(SchemeParams::new(k, memory, f, r))
}

/// Evaluates any row of the comparison table.
pub fn baseline_params(spec: &BaselineSpec) -> Result<SchemeParams, SchemeError> {
    match *spec {
        BaselineSpec::Mn { k, t } => {
            ensure(t >= 1 && t <= k, || format!("need 1 <= t <= K, got K={k}, t={t}"))?;
            Ok(SchemeParams::new(
                big(k),
                frac(big(t), big(k)),
                choose(k, t),
                frac(big(k - t), big(t + 1)),
            ))
        }
        BaselineSpec::Grouping { k, q, z } => {
            ensure(z >= 1 && z <= q && q <= k, || format!("need 1 <= z <= q <= K, got K={k}, q={q}, z={z}"))?;
            let f = big(q / q.gcd(&k)) * choose(q, z);
            let r = frac(big(k), big(q)) * frac(big(q - z), big(z + 1));
            Ok(SchemeParams::new(big(k), frac(big(z), big(q)), f, r))
        }
        BaselineSpec::Wclc { m, t, q, z } => {
            check_mtqz(m, t, q, z)?;
            let floor = (q - 1) / (q - z);
            let k = choose(m, t) * pow(q, t);
            let memory = BigRational::one() - Pow::pow(frac(big(q - z), big(q)), t as u32);
            let f = pow(floor, t) * pow(q, m - 1);
            let r = Pow::pow(frac(big(q - z), big(floor)), t as u32);
            Ok(SchemeParams::new(k, memory, f, r))
        }
        BaselineSpec::Wcwc { m, q, z } => {
            ensure(z >= 1 && z < q && m >= 1, || format!("need m >= 1 and 1 <= z < q, got m={m}, q={q}, z={z}"))?;
            exp32(m)?;
            Ok(SchemeParams::new(
                big(m * q),
                frac(big(z), big(q)),
                big(z) * Pow::pow(choose(q, z), m as u32),
                frac(big(q - z), big(z)),
            ))
        }
        BaselineSpec::Ytcc { h, a, b, r } => {
            ensure(r < a && a < h && r < b && b < h && a + b <= h + r, || {
                format!("need r < a < H, r < b < H, a + b <= H + r, got H={h}, a={a}, b={b}, r={r}")
            })?;
            let f = choose(h, b);
            let memory = BigRational::one() - frac(choose(a, r) * choose(h - a, b - r), f.clone());
            let m = (choose(h + 2 * r - a - b, r)).min(choose(a + b - 2 * r, a - r));
            let load = frac(choose(h, a + b - 2 * r) * m, f.clone());
            Ok(SchemeParams::new(choose(h, a), memory, f, load))
        }
        BaselineSpec::Cksm1 { p, k, t, m } => {
            check_cksm(p, k, t, m)?;
            let unit = |x: u64| gaussian_binomial(x, 1, p);
            let users = frac(
                pow(p, t * (t - 1) / 2) * (0..t).map(|i| unit(k - i)).product::<BigUint>(),
                factorial(t),
            );
            let kept = frac(
                pow(p, m * t) * (0..m).map(|i| unit(k - t - i)).product::<BigUint>(),
                (0..m).map(|i| unit(k - i)).product(),
            );
            let f = frac(
                pow(p, m * (m - 1) / 2) * (0..m).map(|i| unit(k - i)).product::<BigUint>(),
                factorial(m),
            );
            let load = frac(
                factorial(m) * pow(p, m * t) * pow(p, t * (t - 1) / 2)
                    * (0..t).map(|i| unit(k - m - i)).product::<BigUint>(),
                factorial(m + t),
            );
            Ok(SchemeParams::new(
                integral(users, "K")?,
                BigRational::one() - kept,
                integral(f, "F")?,
                load,
            ))
        }
        BaselineSpec::Cksm2 { p, k, t, m } => {
            check_cksm(p, k, t, m)?;
            let g = |a: u64, b: u64| gaussian_binomial(a, b, p);
            let f = g(k, m + t);
            Ok(SchemeParams::new(
                g(k, t),
                BigRational::one() - frac(g(k - t, m), f.clone()),
                f.clone(),
                frac(g(k, m), f),
            ))
        }
        BaselineSpec::SchemeA { m, t, q, z } => scheme_a_params(m, t, q, z),
        BaselineSpec::SchemeB { m, t, q, z } => scheme_b_params(m, t, q, z),
        BaselineSpec::SchemeC { m, t, q } => scheme_c_params(m, t, q),
    }
}

fn check_cksm(p: u64, k: u64, t: u64, m: u64) -> Result<(), SchemeError> {
    ensure(is_prime_power(p), || format!("p = {p} is not a prime power"))?;
    ensure(m >= 1 && t >= 1 && m + t <= k, || format!("need m, t >= 1 and m + t <= k, got k={k}, t={t}, m={m}"))
}

fn integral(x: BigRational, what: &str) -> Result<BigUint, SchemeError> {
    if !x.is_integer() {
        return Err(SchemeError::InvalidRange(format!("{what} = {x} is not an integer")));
    }
    x.to_integer()
        .to_biguint()
        .ok_or_else(|| SchemeError::InvalidRange(format!("{what} is negative")))
}

/// Ratios of a union-construction scheme against the WCLC scheme it is
/// compared with at the same number of users and memory ratio.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioReport {
    pub scheme: BaselineSpec,
    pub baseline: BaselineSpec,
    pub subpacketization_ratio: BigRational,
    pub load_ratio: BigRational,
    pub same_users: bool,
    pub same_memory: bool,
}

/// The WCLC instance matched to Scheme A, B or C: `(m, t, q, z)` for A,
/// `(m, t, C(q,z), C(q-1,z-1))` for B and `(m, t, q^2, q)` for C.
pub fn wclc_counterpart(spec: &BaselineSpec) -> Result<BaselineSpec, SchemeError> {
    let small = |x: BigUint| {
        x.to_u64()
            .ok_or_else(|| SchemeError::InvalidRange("WCLC counterpart out of range".into()))
    };
    match *spec {
        BaselineSpec::SchemeA { m, t, q, z } => Ok(BaselineSpec::Wclc { m, t, q, z }),
        BaselineSpec::SchemeB { m, t, q, z } => {
            check_mtqz(m, t, q, z)?;
            Ok(BaselineSpec::Wclc { m, t, q: small(choose(q, z))?, z: small(choose(q - 1, z - 1))? })
        }
        BaselineSpec::SchemeC { m, t, q } => {
            let q2 = q
                .checked_mul(q)
                .ok_or_else(|| SchemeError::InvalidRange("q^2 overflows".into()))?;
            Ok(BaselineSpec::Wclc { m, t, q: q2, z: q })
        }
        other => Err(SchemeError::InvalidRange(format!("{other} is not compared against WCLC"))),
    }
}

pub fn compare_ratios(spec: &BaselineSpec) -> Result<RatioReport, SchemeError> {
    let baseline = wclc_counterpart(spec)?;
    let ours = baseline_params(spec)?;
    let theirs = baseline_params(&baseline)?;
    Ok(RatioReport {
        scheme: *spec,
        baseline,
        subpacketization_ratio: frac(ours.subpacketization.clone(), theirs.subpacketization.clone()),
        load_ratio: ours.load / theirs.load,
        same_users: ours.users == theirs.users,
        same_memory: ours.memory_ratio == theirs.memory_ratio,
    })
}

/// Smallest `m >= t` with `C(m,t) K1^t >= target`, treating the surplus as
/// virtual users. `None` if `t` or `k1` is zero.
pub fn virtual_user_groups(target: u64, t: u64, k1: u64) -> Option<u64> {
    if t == 0 || k1 == 0 {
        return None;
    }
    let per = pow(k1, t);
    let target = big(target);
    (t..).find(|&m| choose(m, t) * &per >= target)
}

/// Materializes Scheme A, B or C and checks it against the closed form:
/// same `K` and `F`, `Z/F = M/N` and `S = R F`.
pub fn scheme_build(spec: &BaselineSpec, opts: BuildOptions) -> Result<PdaArray, SchemeError> {
    let expected = baseline_params(spec)?;
    let narrow = |x: u64| usize::try_from(x).map_err(|_| SchemeError::InvalidRange(format!("{x} too large")));
    let (base, m, t) = match *spec {
        BaselineSpec::SchemeA { m, t, q, z } => (transform_to_base(&mn_pda(narrow(q)?, narrow(z)?)?)?, m, t),
        BaselineSpec::SchemeB { m, t, q, z } => {
            (transform_to_base(&transpose_pda(&mn_pda(narrow(q)?, narrow(z)?)?)?)?, m, t)
        }
        BaselineSpec::SchemeC { m, t, q } => (g2_base_pda(narrow(q)?)?, m, t),
        other => return Err(SchemeError::NotBuildable(other.to_string())),
    };
    let array = construct_pmt(&base, narrow(m)?, narrow(t)?, opts)?;
    let got = verify_pda(&array).map_err(|e| SchemeError::Mismatch(e.to_string()))?;
    let checks = [
        ("K", big(got.k as u64) == expected.users),
        ("F", big(got.f as u64) == expected.subpacketization),
        ("Z/F", frac(big(got.z as u64), big(got.f as u64)) == expected.memory_ratio),
        ("S", frac(big(got.s as u64), big(got.f as u64)) == expected.load),
    ];
    if let Some((name, _)) = checks.iter().find(|(_, ok)| !ok) {
        return Err(SchemeError::Mismatch(format!("{name} of {spec} built as {got:?}")));
    }
    Ok(array)
}

/// Decimal rendering with `digits` significant digits; exponent notation
/// outside `[1e-4, 1e6)`.
pub fn decimal(x: &BigRational, digits: usize) -> String {
    let v = x.to_f64().unwrap_or(f64::NAN);
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let digits = digits.max(1);
    let exp = v.abs().log10().floor() as i32;
    if (-4..6).contains(&exp) {
        let places = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{v:.places$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    } else {
        let s = format!("{v:.prec$e}", prec = digits - 1);
        let (mant, e) = s.split_once('e').expect("exponent form");
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{e}")
    }
}

/// `p/q`, or just `p` when the denominator is one.
pub fn exact(x: &BigRational) -> String {
    x.to_string()
}
