//! State-vector updates on qubit registers without forming full-space
//! matrices.
//!
//! Qubit q of an n-qubit register owns bit (n-1-q) of the basis index, so
//! qubit 0 is the most significant. A k-qubit operator passed to these
//! functions acts with its own qubit 0 on `targets[0]`, qubit 1 on
//! `targets[1]`, and so on.

use crate::error::{Error, Result};
use crate::matrix::{c, CMat, CVec};

/// Number of qubits for a power-of-two dimension.
pub fn num_qubits(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::Dimension(format!("dimension {dim} is not 2^n")));
    }
    Ok(dim.trailing_zeros() as usize)
}

fn check_targets(n: usize, targets: &[usize]) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::Dimension(format!(
                "target qubit {t} out of range for {n} qubits"
            )));
        }
        if targets[..i].contains(&t) {
            return Err(Error::Dimension(format!("duplicate target qubit {t}")));
        }
    }
    Ok(())
}

/// Basis index with the bits of `t` placed at the target positions.
#[inline]
fn place(t: usize, targets: &[usize], n: usize) -> usize {
    let k = targets.len();
    let mut idx = 0;
    for (b, &q) in targets.iter().enumerate() {
        idx |= ((t >> (k - 1 - b)) & 1) << (n - 1 - q);
    }
    idx
}

/// Applies a (not necessarily unitary) 2^k x 2^k operator on the given
/// target qubits of a state vector.
pub fn apply_op_at(psi: &CVec, targets: &[usize], op: &CMat) -> Result<CVec> {
    let n = num_qubits(psi.len())?;
    let k = targets.len();
    check_targets(n, targets)?;
    let block = 1usize << k;
    if op.nrows() != block || op.ncols() != block {
        return Err(Error::Dimension(format!(
            "operator is {}x{} but {k} targets need {block}x{block}",
            op.nrows(),
            op.ncols()
        )));
    }
    let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
    let mut out = CVec::zeros(psi.len());
    let mut gathered = vec![c(0.0, 0.0); block];
    for j in 0..(1usize << rest.len()) {
        let base = place(j, &rest, n);
        for (tin, g) in gathered.iter_mut().enumerate() {
            *g = psi[base | place(tin, targets, n)];
        }
        for tout in 0..block {
            let mut acc = c(0.0, 0.0);
            for (tin, g) in gathered.iter().enumerate() {
                acc += op[(tout, tin)] * g;
            }
            out[base | place(tout, targets, n)] = acc;
        }
    }
    Ok(out)
}

/// Contracts <bra| against the target qubits, returning the unnormalized
/// state on the remaining qubits (kept in ascending qubit order).
pub fn contract_at(psi: &CVec, targets: &[usize], bra: &CVec) -> Result<CVec> {
    let n = num_qubits(psi.len())?;
    let k = targets.len();
    check_targets(n, targets)?;
    let block = 1usize << k;
    if bra.len() != block {
        return Err(Error::Dimension(format!(
            "bra has dim {} but {k} targets need {block}",
            bra.len()
        )));
    }
    let rest: Vec<usize> = (0..n).filter(|q| !targets.contains(q)).collect();
    let mut out = CVec::zeros(1usize << rest.len());
    for j in 0..out.len() {
        let base = place(j, &rest, n);
        let mut acc = c(0.0, 0.0);
        for t in 0..block {
            acc += bra[t].conj() * psi[base | place(t, targets, n)];
        }
        out[j] = acc;
    }
    Ok(out)
}
