//! Cohomology of line bundles O_X(a,b,c) by the Künneth formula.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chow::{checked, ChowError, Divisor3};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("cohomology index {0} out of range for P1 (expected 0 or 1)")]
    IndexOutOfRange(u32),
    #[error("value does not fit in 64 bits")]
    Overflow,
}

impl From<ChowError> for CohomologyError {
    fn from(_: ChowError) -> Self {
        CohomologyError::Overflow
    }
}

pub type Result<T> = std::result::Result<T, CohomologyError>;

/// Dimensions (h0, h1, h2, h3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CohomologyVector(pub [u64; 4]);

impl CohomologyVector {
    pub fn h(&self, k: usize) -> u64 {
        self.0[k]
    }

    /// Alternating sum h0 − h1 + h2 − h3.
    pub fn euler(&self) -> Result<i64> {
        let mut acc: i64 = 0;
        for (k, &h) in self.0.iter().enumerate() {
            let h = i64::try_from(h).map_err(|_| CohomologyError::Overflow)?;
            acc = if k % 2 == 0 { acc.checked_add(h) } else { acc.checked_sub(h) }
                .ok_or(CohomologyError::Overflow)?;
        }
        Ok(acc)
    }
}

/// h^i(P¹, O(a)).
pub fn h_p1(i: u32, a: i64) -> Result<u64> {
    let v = match i {
        0 => a.checked_add(1),
        1 => a.checked_neg().and_then(|x| x.checked_sub(1)),
        _ => return Err(CohomologyError::IndexOutOfRange(i)),
    }
    .ok_or(CohomologyError::Overflow)?;
    Ok(v.max(0) as u64)
}

/// All four h^k(O_X(D)).
pub fn h_line(d: &Divisor3) -> Result<CohomologyVector> {
    let mut per = [[0u64; 2]; 3];
    for (f, &a) in d.0.iter().enumerate() {
        per[f] = [h_p1(0, a)?, h_p1(1, a)?];
    }
    let mut h = [0u64; 4];
    for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                let prod = per[0][i]
                    .checked_mul(per[1][j])
                    .and_then(|x| x.checked_mul(per[2][l]))
                    .ok_or(CohomologyError::Overflow)?;
                let k = i + j + l;
                h[k] = h[k].checked_add(prod).ok_or(CohomologyError::Overflow)?;
            }
        }
    }
    Ok(CohomologyVector(h))
}

/// χ(O_X(a,b,c)) = (a+1)(b+1)(c+1).
pub fn euler_char(d: &Divisor3) -> Result<i64> {
    let mut acc: i64 = 1;
    for &a in &d.0 {
        let f = checked(a.checked_add(1))?;
        acc = checked(acc.checked_mul(f))?;
    }
    Ok(acc)
}

/// The divisor K_X − D = (−2−a1, −2−a2, −2−a3).
pub fn serre_dual(d: &Divisor3) -> Result<Divisor3> {
    let mut out = [0i64; 3];
    for (o, &a) in out.iter_mut().zip(d.0.iter()) {
        *o = checked((-2i64).checked_sub(a))?;
    }
    Ok(Divisor3(out))
}

/// dim Ext¹(O_X(from), O_X(to)) = h¹(O_X(to − from)).
pub fn ext1_line(from: &Divisor3, to: &Divisor3) -> Result<u64> {
    let diff = to.add(&from.neg()?)?;
    Ok(h_line(&diff)?.h(1))
}
