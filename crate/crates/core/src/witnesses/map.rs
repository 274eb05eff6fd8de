use super::Witness;
use crate::densemat::min_eigenvalue;
use crate::error::{Error, Result};
use crate::skewcanon::build_j;
use crate::{BipartiteOperator, ComplexMatrix};

/// `φ(ρ) = Tr_B(W·(I⊗ρᵀ))`, entry `(i,k)` = `Σ_{jl} W_{(i,j),(k,l)}·ρ_{jl}`.
pub fn jamiolkowski_apply(w: &Witness, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (d1, d2) = (w.d1(), w.d2());
    if rho.rows() != d2 || rho.cols() != d2 {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, second factor has dimension {d2}",
            rho.rows(),
            rho.cols()
        )));
    }
    check_state(rho)?;
    let mut out = ComplexMatrix::zeros(d1, d1);
    for i in 0..d1 {
        for k in 0..d1 {
            let mut acc = crate::C64::new(0.0, 0.0);
            for j in 0..d2 {
                for l in 0..d2 {
                    acc += w.op().get((i, j), (k, l)) * rho[(j, l)];
                }
            }
            out[(i, k)] = acc;
        }
    }
    Ok(out)
}

fn check_state(rho: &ComplexMatrix) -> Result<()> {
    let tr = rho.trace();
    if (tr.re - 1.0).abs() > 1e-12 || tr.im.abs() > 1e-12 {
        return Err(Error::NotAState(format!("trace {tr} differs from 1")));
    }
    let op = BipartiteOperator::new(rho.rows(), 1, rho.clone())?;
    let m = min_eigenvalue(&op)?;
    if m < -1e-10 {
        return Err(Error::NotAState(format!("minimum eigenvalue {m:e} is negative")));
    }
    Ok(())
}

/// `I·Tr ρ − ρ − Jᵀ·ρᵀ·J` for the canonical generator.
pub fn jamiolkowski_closed_form(d: usize, lambdas: &[f64], rho: &ComplexMatrix) -> Result<ComplexMatrix> {
    if rho.rows() != d || rho.cols() != d {
        return Err(Error::DimensionMismatch(format!("state must be {d}x{d}")));
    }
    let j = build_j(d, lambdas)?.to_complex();
    let tr = rho.trace();
    let id = ComplexMatrix::identity(d).scale_cx(tr);
    let t = &(&j.transpose() * &rho.transpose()) * &j;
    Ok(&(&id - rho) - &t)
}
