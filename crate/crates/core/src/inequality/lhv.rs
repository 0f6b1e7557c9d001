use super::BellInequality;
use crate::error::{Error, Result};
use crate::quantum::{pauli, SingleQubitObservable};
use crate::scalar::Real;

const MAX_PER_PARTY: usize = 2;

/// Maximum of the inequality over all deterministic local assignments.
///
/// Every distinct observable of every party gets a fixed `+1` or `-1`
/// outcome (identities are pinned to `+1`). For each assignment the value
/// of a setting is its coefficient at the outcome pattern the assignment
/// produces, so the search costs `2^(#observables) * #settings`.
pub fn lhv_bound_bruteforce<T: Real>(ineq: &BellInequality<T>) -> Result<T> {
    let n = ineq.n_qubits();
    let identity = pauli::<T>("I")?;
    let mut parties: Vec<Vec<SingleQubitObservable<T>>> = vec![Vec::new(); n];
    // slot[s][k]: bit position of setting s's observable on party k, None for identity
    let mut slot: Vec<Vec<Option<usize>>> = Vec::with_capacity(ineq.settings().len());
    for setting in ineq.settings() {
        let mut row = Vec::with_capacity(n);
        for (k, obs) in setting.observables().iter().enumerate() {
            if obs.same_as(&identity) {
                row.push(None);
                continue;
            }
            let idx = match parties[k].iter().position(|o| o.same_as(obs)) {
                Some(i) => i,
                None => {
                    parties[k].push(obs.clone());
                    parties[k].len() - 1
                }
            };
            if parties[k].len() > MAX_PER_PARTY {
                return Err(Error::TooManyObservables { party: k, count: parties[k].len() });
            }
            row.push(Some(idx));
        }
        slot.push(row);
    }
    let offsets: Vec<usize> = parties
        .iter()
        .scan(0, |acc, p| {
            let start = *acc;
            *acc += p.len();
            Some(start)
        })
        .collect();
    let total_bits: usize = parties.iter().map(Vec::len).sum();
    let bits: Vec<Vec<Option<usize>>> = slot
        .iter()
        .map(|row| row.iter().enumerate().map(|(k, s)| s.map(|i| offsets[k] + i)).collect())
        .collect();

    let mut best = T::neg_infinity();
    for assign in 0u64..(1u64 << total_bits) {
        let mut value = T::zero();
        for (row, coeffs) in bits.iter().zip(ineq.outcome_coeffs()) {
            let mut outcome = 0usize;
            for (k, b) in row.iter().enumerate() {
                if let Some(b) = b {
                    if (assign >> b) & 1 == 1 {
                        outcome |= 1 << (n - 1 - k);
                    }
                }
            }
            value = value + coeffs[outcome];
        }
        best = best.max(value);
    }
    Ok(best)
}
