use super::{GateOp, Rof};
use crate::error::{Error, Result};
use crate::mpoly::MultilinearPoly;
use crate::scalars::FieldElem;

/// Result of removing constant subtrees from a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pruned {
    Const(FieldElem),
    Tree(Rof),
}

/// Collapses every subtree that computes a constant (some node with `α = 0`,
/// or a gate over two constants) and folds the constant into the parent's
/// label. The result computes the same polynomial, every remaining node has
/// `α ≠ 0`, and no gate has a constant child.
pub fn prune(rof: &Rof) -> Pruned {
    match rof {
        Rof::Leaf { alpha, beta, .. } => {
            if alpha.is_zero() {
                Pruned::Const(beta.clone())
            } else {
                Pruned::Tree(rof.clone())
            }
        }
        Rof::Gate {
            op,
            alpha,
            beta,
            left,
            right,
        } => {
            if alpha.is_zero() {
                return Pruned::Const(beta.clone());
            }
            match (prune(left), prune(right)) {
                (Pruned::Const(a), Pruned::Const(b)) => {
                    let inner = match op {
                        GateOp::Plus => &a + &b,
                        GateOp::Times => &a * &b,
                    };
                    Pruned::Const(&(alpha * &inner) + beta)
                }
                (Pruned::Const(c), Pruned::Tree(t)) | (Pruned::Tree(t), Pruned::Const(c)) => {
                    match op {
                        GateOp::Plus => {
                            Pruned::Tree(t.relabel_root(alpha, &(&(alpha * &c) + beta)))
                        }
                        GateOp::Times if c.is_zero() => Pruned::Const(beta.clone()),
                        GateOp::Times => Pruned::Tree(t.relabel_root(&(alpha * &c), beta)),
                    }
                }
                (Pruned::Tree(l), Pruned::Tree(r)) => {
                    Pruned::Tree(Rof::gate(*op, alpha.clone(), beta.clone(), l, r))
                }
            }
        }
    }
}

/// True when `∂_i∂_j p ≠ 0` for every pair of distinct variables of `p`.
/// For a ROP this characterizes computability without addition gates.
pub fn is_multiplicative_semantic(p: &MultilinearPoly) -> bool {
    let vars = p.vars();
    vars.iter().enumerate().all(|(a, &i)| {
        vars[a + 1..].iter().all(|&j| {
            let d = p
                .partial(i)
                .and_then(|q| q.partial(j))
                .expect("indices from Var(p)");
            !d.is_zero()
        })
    })
}

fn find_parent(rof: &Rof, var: usize) -> Option<(&Rof, &Rof)> {
    // Returns (leaf of `var`, sibling subtree).
    match rof {
        Rof::Leaf { .. } => None,
        Rof::Gate { left, right, .. } => {
            for (a, b) in [(left, right), (right, left)] {
                if let Rof::Leaf { var: v, .. } = a.as_ref() {
                    if *v == var {
                        return Some((a, b));
                    }
                }
            }
            find_parent(left, var).or_else(|| find_parent(right, var))
        }
    }
}

/// For a multiplicative formula and a variable `x_i` of it, finds `x_j` and
/// `γ` with `∂_{x_j}(g)|_{x_i=γ} = 0`, where `g` is the computed polynomial.
///
/// `x_j` is the smallest variable below the sibling of `x_i`'s leaf and
/// `γ = -β/α` zeroes that leaf. The identity is checked before returning.
pub fn mrops_witness(rof: &Rof, i: usize) -> Result<(usize, FieldElem)> {
    if let Some(v) = rof.validate().first() {
        return Err(Error::InvalidFormula(format!("{v:?}")));
    }
    if !rof.is_multiplicative_structural() {
        return Err(Error::NotMultiplicative);
    }
    let leaves = rof.num_leaves();
    if leaves < 2 {
        return Err(Error::TooFewVariables(leaves));
    }
    if let Some(v) = degenerate_leaf(rof) {
        return Err(Error::DegenerateLeaf(v));
    }
    let (leaf, sibling) = find_parent(rof, i).ok_or(Error::VariableNotPresent(i))?;
    let j = sibling.vars()[0];
    let gamma = -(leaf.beta() / leaf.alpha());

    let g = rof.evaluate(rof.max_var())?;
    let check = g.partial(j)?.restrict(i, &gamma)?;
    assert!(
        check.is_zero(),
        "multiplicative witness identity failed for {rof}"
    );
    Ok((j, gamma))
}

fn degenerate_leaf(rof: &Rof) -> Option<usize> {
    match rof {
        Rof::Leaf { var, alpha, .. } => alpha.is_zero().then_some(*var),
        Rof::Gate { left, right, .. } => degenerate_leaf(left).or_else(|| degenerate_leaf(right)),
    }
}

/// For a formula on exactly three variables, a restriction `x_i = a` after
/// which the polynomial has degree at most one.
///
/// The root splits the variables into a single leaf and a two-variable side.
/// Under `+` any value for a variable of the two-variable side works (0 is
/// used); under `×` the value zeroing the single leaf is used.
pub fn three_var_linearizing_restriction(rof: &Rof) -> Result<(usize, FieldElem)> {
    if let Some(v) = rof.validate().first() {
        return Err(Error::InvalidFormula(format!("{v:?}")));
    }
    let count = rof.num_leaves();
    if count < 3 {
        return Err(Error::TooFewVariables(count));
    }
    if count > 3 {
        return Err(Error::TooManyVariables(count));
    }
    let Rof::Gate {
        op, left, right, ..
    } = rof
    else {
        unreachable!("three leaves imply a gate");
    };
    let (single, pair) = if left.num_leaves() == 1 {
        (left, right)
    } else {
        (right, left)
    };
    let field = rof.field();
    let choice = match (op, single.as_ref()) {
        (GateOp::Times, Rof::Leaf { var, alpha, beta }) if !alpha.is_zero() => {
            (*var, -(beta / alpha))
        }
        _ => (pair.vars()[0], field.zero()),
    };
    let restricted = rof.evaluate(rof.max_var())?.restrict(choice.0, &choice.1)?;
    assert!(
        restricted.degree() <= 1,
        "linearizing restriction failed for {rof}"
    );
    Ok(choice)
}
