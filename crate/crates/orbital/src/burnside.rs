//! Orbit counting via the Cauchy-Frobenius (Burnside) lemma over conjugacy
//! classes: |V/G| = (1/|G|) * sum over classes c of |c| * q^dim(fix(c)),
//! where fix(c) is the fixed space of the class representative acting on V.

use crate::group::GroupSpec;
use crate::OrbitalError;
use ffla::GfMatrix;
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use symspace::{sym_matrix, MonomialBasis};
use std::sync::Arc;

/// Number of orbits of the group on the full space of forms spanned by
/// `basis`. Exact; errors if the Burnside sum is not divisible by |G|
/// (which would indicate corrupted class data) or if the group exposes no
/// conjugacy classes.
pub fn burnside_count(
    group: &GroupSpec,
    basis: &Arc<MonomialBasis>,
) -> Result<BigUint, OrbitalError> {
    let classes = group.conjugacy_classes().ok_or(OrbitalError::NoClasses)?;
    let field = group.field();
    let q = BigUint::from(field.q());
    let n = basis.size();
    let mut total = BigUint::zero();
    for (rep, size) in &classes {
        let s = sym_matrix(rep, basis);
        let fix_dim = n - sub_identity_rank(&s);
        total += size * q.pow(fix_dim as u32);
    }
    let (count, rem) = total.div_rem(group.order());
    if !rem.is_zero() {
        return Err(OrbitalError::NonIntegral(
            total.to_string(),
            group.order().to_string(),
        ));
    }
    Ok(count)
}

/// rank(S - I) over F_q.
fn sub_identity_rank(s: &GfMatrix) -> usize {
    let field = s.field();
    let n = s.rows();
    let shifted = GfMatrix::from_fn(Arc::clone(field), n, n, |r, c| {
        let v = s.get(r, c);
        if r == c {
            field.sub(v, 1)
        } else {
            v
        }
    });
    shifted.rank()
}
