use crate::error::{Error, Result};
use crate::mpoly::{linear_dependent, MultilinearPoly};
use crate::scalars::FieldElem;

/// `g|_{x_i=a, x_j=b}` has degree at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C1Witness {
    pub i: usize,
    pub j: usize,
    pub a: FieldElem,
    pub b: FieldElem,
}

/// `coefficients · (x_i, x_j, ∂_i g, ∂_j g, 1) = 0` with a nonzero
/// coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C2Witness {
    pub i: usize,
    pub j: usize,
    pub coefficients: Vec<FieldElem>,
}

fn require_four(g: &MultilinearPoly) -> Result<()> {
    if g.n() != 4 {
        return Err(Error::WrongArity {
            expected: 4,
            got: g.n(),
        });
    }
    Ok(())
}

fn mask(vars: &[usize]) -> u32 {
    vars.iter().fold(0, |m, &v| m | 1 << (v - 1))
}

/// Searches for `i < j` and `a, b` such that restricting `x_i = a, x_j = b`
/// leaves a polynomial of degree at most one.
///
/// With `{k, l}` the complementary pair, the only coefficient that can keep
/// degree two is that of `x_k x_l`, which after restriction reads
/// `c(a, b) = b·(g_{ijkl}·a + g_{jkl}) + (g_{ikl}·a + g_{kl})`.
/// The origin is used when `g_{kl} = 0`. Otherwise, if the bracket
/// multiplying `b` is nonzero for `a = 0` or `a = 1`, solve for `b`; if not,
/// `c` depends on `a` alone and vanishes somewhere iff it is not a nonzero
/// constant. This is exact over every field.
pub fn check_c1prime(g: &MultilinearPoly) -> Result<Option<C1Witness>> {
    require_four(g)?;
    let field = g.field();
    for i in 1..=4 {
        for j in i + 1..=4 {
            let kl: Vec<usize> = (1..=4).filter(|&v| v != i && v != j).collect();
            let c_ijkl = g.coeff(0b1111);
            let c_ikl = g.coeff(mask(&[i, kl[0], kl[1]]));
            let c_jkl = g.coeff(mask(&[j, kl[0], kl[1]]));
            let c_kl = g.coeff(mask(&kl));
            let slope = |a: &FieldElem| &(&c_ijkl * a) + &c_jkl;
            let offset = |a: &FieldElem| &(&c_ikl * a) + &c_kl;
            let origin = c_kl.is_zero().then(|| (field.zero(), field.zero()));
            let found = origin.or_else(|| {
                [field.zero(), field.one()]
                    .into_iter()
                    .find(|a| !slope(a).is_zero())
                    .map(|a| {
                        let b = -(&offset(&a) / &slope(&a));
                        (a, b)
                    })
                    .or_else(|| (!c_ikl.is_zero()).then(|| (-(&c_kl / &c_ikl), field.zero())))
            });
            if let Some((a, b)) = found {
                let restricted = g.restrict_many(&[(i, a.clone()), (j, b.clone())])?;
                assert!(restricted.degree() <= 1, "C1' witness failed for {g}");
                return Ok(Some(C1Witness { i, j, a, b }));
            }
        }
    }
    Ok(None)
}

/// First pair `i < j` (in lexicographic order over `1..=n`) for which
/// `x_i, x_j, ∂_i g, ∂_j g, 1` are linearly dependent.
pub fn check_c2prime(g: &MultilinearPoly) -> Result<Option<C2Witness>> {
    let n = g.n();
    let field = g.field();
    let one = MultilinearPoly::constant(n, field.one())?;
    for i in 1..=n {
        for j in i + 1..=n {
            let polys = [
                MultilinearPoly::var(n, field, i)?,
                MultilinearPoly::var(n, field, j)?,
                g.partial(i)?,
                g.partial(j)?,
                one.clone(),
            ];
            if let Some(coefficients) = linear_dependent(&polys)? {
                return Ok(Some(C2Witness { i, j, coefficients }));
            }
        }
    }
    Ok(None)
}
