//! Block structure of the coefficient sequence and empirical tail bounds.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::rational_str;
use crate::exec::Exec;
use crate::numeration::weight;
use crate::product::spec::ProductSpec;
use crate::product::stream::coefficients_range;
use crate::product::value::CoefficientValue;

/// Scalars `f_l` such that block `l` of length `Q_level` equals `f_l` times
/// the first block. `f_0 = 1`.
pub fn copy_structure(spec: &ProductSpec, level: usize, num_blocks: u64) -> Result<Vec<CoefficientValue>> {
    copy_structure_with(Exec::default(), spec, level, num_blocks)
}

pub fn copy_structure_with(
    exec: Exec,
    spec: &ProductSpec,
    level: usize,
    num_blocks: u64,
) -> Result<Vec<CoefficientValue>> {
    if num_blocks == 0 {
        return Err(Error::InvalidArgument("need at least one block".into()));
    }
    let block_len = weight(&spec.radix, level)
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("block length Q_{level} does not fit in memory")))?;
    block_len.checked_mul(num_blocks).ok_or_else(|| Error::InvalidArgument("too many blocks".into()))?;
    let first = coefficients_range(exec, spec, 0, 0, block_len)?;
    let scalars = exec.try_map_range(0, num_blocks, |l| {
        let block = coefficients_range(Exec::Sequential, spec, 0, l * block_len, (l + 1) * block_len)?;
        let scalar = block[0].clone();
        for (i, (got, base)) in block.iter().zip(&first).enumerate() {
            if *got != scalar.mul(base)? {
                return Err(Error::StructureViolation { block: l, offset: i as u64 });
            }
        }
        Ok(scalar)
    })?;
    Ok(scalars)
}

/// Largest observed `|a_n(m)| / |a_0(m)|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundednessReport {
    pub n_max: usize,
    pub m_max: u64,
    /// Empirical lower bound for the boundedness constant.
    #[serde(with = "rational_str")]
    pub sup_ratio: BigRational,
    /// `(n, m)` where the supremum is first attained.
    pub argmax: (usize, u64),
    /// Indices where `a_0(m) = 0` but `a_n(m) != 0`.
    pub incomparable: Vec<(usize, u64)>,
}

pub fn boundedness_report(spec: &ProductSpec, n_max: usize, m_max: u64) -> Result<BoundednessReport> {
    boundedness_report_with(Exec::default(), spec, n_max, m_max)
}

pub fn boundedness_report_with(exec: Exec, spec: &ProductSpec, n_max: usize, m_max: u64) -> Result<BoundednessReport> {
    let base = coefficients_range(exec, spec, 0, 0, m_max + 1)?;
    let base_abs: Vec<BigRational> = base.iter().map(CoefficientValue::abs_rational).collect::<Result<_>>()?;
    let per_tail = exec.try_map_range(0, n_max as u64 + 1, |n| {
        let tail = coefficients_range(Exec::Sequential, spec, n as usize, 0, m_max + 1)?;
        let mut best: Option<(BigRational, u64)> = None;
        let mut incomparable = Vec::new();
        for (m, value) in tail.iter().enumerate() {
            let top = value.abs_rational()?;
            if base_abs[m].is_zero() {
                if !top.is_zero() {
                    incomparable.push((n as usize, m as u64));
                }
                continue;
            }
            let r = top / &base_abs[m];
            if best.as_ref().is_none_or(|(b, _)| r > *b) {
                best = Some((r, m as u64));
            }
        }
        Ok::<_, Error>((best, incomparable))
    })?;
    let mut sup = BigRational::zero();
    let mut argmax = (0, 0);
    let mut incomparable = Vec::new();
    for (n, (best, inc)) in per_tail.into_iter().enumerate() {
        if let Some((r, m)) = best {
            if r > sup {
                sup = r;
                argmax = (n, m);
            }
        }
        incomparable.extend(inc);
    }
    Ok(BoundednessReport { n_max, m_max, sup_ratio: sup, argmax, incomparable })
}
