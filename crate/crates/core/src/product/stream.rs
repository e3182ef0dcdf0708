use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numeration::{to_digits, to_digits_u64, DigitVector};
use crate::product::spec::{Coefficients, ProductSpec};
use crate::product::value::CoefficientValue;

fn digit_product(spec: &ProductSpec, tail: usize, digits: &DigitVector) -> Result<CoefficientValue> {
    digits.iter().try_fold(spec.one(), |acc, (y, s)| acc.mul(&spec.c(s, tail + y)))
}

/// Taylor coefficient `a_tail(m)` of the tail product, read off the digits of
/// `m` in the shifted radix.
pub fn coefficient(spec: &ProductSpec, tail: usize, m: &BigUint) -> Result<CoefficientValue> {
    let radix = spec.radix.shifted(tail);
    digit_product(spec, tail, &to_digits(m, &radix))
}

pub fn coefficient_u64(spec: &ProductSpec, tail: usize, m: u64) -> Result<CoefficientValue> {
    let radix = spec.radix.shifted(tail);
    digit_product(spec, tail, &to_digits_u64(m, &radix))
}

/// `a_tail(lo .. hi)`, computed per index through the digit formula.
pub fn coefficients_range(
    exec: Exec,
    spec: &ProductSpec,
    tail: usize,
    lo: u64,
    hi: u64,
) -> Result<Vec<CoefficientValue>> {
    let radix = spec.radix.shifted(tail);
    exec.try_map_range(lo, hi, |m| digit_product(spec, tail, &to_digits_u64(m, &radix)))
}

/// First `len` coefficients of the tail product by multiplying out the
/// truncated factor polynomials. Independent of [`coefficient`].
pub fn expand(spec: &ProductSpec, tail: usize, len: usize) -> Result<Vec<CoefficientValue>> {
    if len == 0 {
        return Err(Error::InvalidArgument("expansion length must be at least 1".into()));
    }
    match &spec.coeffs {
        Coefficients::Rational(_) => expand_rational(spec, tail, len),
        Coefficients::UnitRoot { order, .. } => expand_group_ring(spec, tail, len, *order),
    }
}

/// Exponent step `Q_y / Q_tail` of each factor `y = tail, tail + 1, ...`
/// while it stays below `len`.
fn factor_steps(spec: &ProductSpec, tail: usize, len: usize) -> Vec<(usize, u64)> {
    let mut out = Vec::new();
    let mut step = 1u64;
    let mut y = tail;
    while (step as u128) < len as u128 {
        out.push((y, step));
        step = match step.checked_mul(spec.radix.q(y + 1)) {
            Some(s) => s,
            None => break,
        };
        y += 1;
    }
    out
}

fn expand_rational(spec: &ProductSpec, tail: usize, len: usize) -> Result<Vec<CoefficientValue>> {
    let mut poly = vec![BigRational::zero(); len];
    poly[0] = BigRational::one();
    for (y, step) in factor_steps(spec, tail, len) {
        let mut next = poly.clone();
        for s in 1..=spec.radix.max_digit(y) {
            let shift = (s as u128 * step as u128) as usize;
            if shift >= len {
                break;
            }
            let c = spec.c(s, y).to_rational()?;
            if c.is_zero() {
                continue;
            }
            for i in 0..len - shift {
                if !poly[i].is_zero() {
                    next[i + shift] += &c * &poly[i];
                }
            }
        }
        poly = next;
    }
    Ok(poly.into_iter().map(CoefficientValue::Rational).collect())
}

/// Unit-root products expanded in the group ring Z[C_L]: each coefficient is
/// a vector of multiplicities over the L roots.
fn expand_group_ring(spec: &ProductSpec, tail: usize, len: usize, order: u64) -> Result<Vec<CoefficientValue>> {
    let l = order as usize;
    let mut poly = vec![vec![0i64; l]; len];
    poly[0][0] = 1;
    for (y, step) in factor_steps(spec, tail, len) {
        let mut next = poly.clone();
        for s in 1..=spec.radix.max_digit(y) {
            let shift = (s as u128 * step as u128) as usize;
            if shift >= len {
                break;
            }
            let CoefficientValue::UnitRoot { residue, .. } = spec.c(s, y) else {
                unreachable!("unit-root spec yields unit roots");
            };
            for i in 0..len - shift {
                for r in 0..l {
                    let k = poly[i][r];
                    if k != 0 {
                        next[i + shift][(r + residue as usize) % l] += k;
                    }
                }
            }
        }
        poly = next;
    }
    poly.into_iter()
        .enumerate()
        .map(|(m, counts)| {
            let support: Vec<usize> = (0..l).filter(|&r| counts[r] != 0).collect();
            match support.as_slice() {
                [r] if counts[*r] == 1 => Ok(CoefficientValue::unit_root(*r as u64, order)),
                _ => Err(Error::InvalidSpec(format!("coefficient {m} is not a single root of unity: {counts:?}"))),
            }
        })
        .collect()
}

/// Cached coefficient stream of one tail product.
///
/// Reads of an already computed prefix take a shared lock; extending the
/// prefix takes the write lock, so extension is serialized.
#[derive(Debug)]
pub struct CoefficientStream {
    spec: Arc<ProductSpec>,
    tail: usize,
    cache: RwLock<Vec<CoefficientValue>>,
}

impl CoefficientStream {
    pub fn new(spec: Arc<ProductSpec>, tail: usize) -> Self {
        CoefficientStream { spec, tail, cache: RwLock::new(Vec::new()) }
    }

    pub fn tail(&self) -> usize {
        self.tail
    }

    pub fn spec(&self) -> &ProductSpec {
        &self.spec
    }

    pub fn cached_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }

    fn ensure(&self, len: usize) -> Result<()> {
        if self.cached_len() >= len {
            return Ok(());
        }
        let mut cache = self.cache.write().expect("cache lock");
        let start = cache.len();
        if start >= len {
            return Ok(());
        }
        let fresh = coefficients_range(Exec::Sequential, &self.spec, self.tail, start as u64, len as u64)?;
        cache.extend(fresh);
        Ok(())
    }

    pub fn get(&self, m: usize) -> Result<CoefficientValue> {
        self.ensure(m + 1)?;
        Ok(self.cache.read().expect("cache lock")[m].clone())
    }

    pub fn prefix(&self, len: usize) -> Result<Vec<CoefficientValue>> {
        self.ensure(len)?;
        Ok(self.cache.read().expect("cache lock")[..len].to_vec())
    }
}

/// Streams for every tail of one product, created on demand.
#[derive(Debug)]
pub struct StreamSet {
    spec: Arc<ProductSpec>,
    streams: RwLock<BTreeMap<usize, Arc<CoefficientStream>>>,
}

impl StreamSet {
    pub fn new(spec: ProductSpec) -> Self {
        StreamSet { spec: Arc::new(spec), streams: RwLock::new(BTreeMap::new()) }
    }

    pub fn spec(&self) -> &ProductSpec {
        &self.spec
    }

    pub fn tail(&self, n: usize) -> Arc<CoefficientStream> {
        if let Some(s) = self.streams.read().expect("stream lock").get(&n) {
            return Arc::clone(s);
        }
        let mut map = self.streams.write().expect("stream lock");
        Arc::clone(map.entry(n).or_insert_with(|| Arc::new(CoefficientStream::new(Arc::clone(&self.spec), n))))
    }
}
