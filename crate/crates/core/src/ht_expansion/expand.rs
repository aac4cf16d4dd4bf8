use super::window::BondFactor;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use std::collections::HashMap;

/// Default cap on distinct (parity map, centre flag) states held at once.
pub const DEFAULT_STATE_BUDGET: usize = 4_000_000;

/// Spin product after parity reduction: σ² = 1, so only odd exponents remain.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SpinMonomial {
    /// Sites with odd exponent, sorted.
    pub odd_sites: Vec<u32>,
    pub x_power: usize,
    /// The unreduced product contained the centre spin.
    pub touches_center: bool,
    /// Number of expansion terms collapsing onto this monomial.
    pub count: BigInt,
}

/// Reduced expansion of a factor product, truncated at `order`.
#[derive(Clone, Debug)]
pub struct Expansion {
    pub monomials: Vec<SpinMonomial>,
    /// Truncation order actually kept; lower than requested when the state budget forced it.
    pub order: usize,
}

type Key = (Vec<u32>, bool);

pub(crate) fn toggle(odd: &[u32], a: u32, b: u32) -> Vec<u32> {
    let mut out = odd.to_vec();
    for s in [a, b] {
        match out.binary_search(&s) {
            Ok(i) => {
                out.remove(i);
            }
            Err(i) => out.insert(i, s),
        }
    }
    out
}

pub(crate) fn add_into(dst: &mut [u128], src: &[u128], shift: usize) -> Result<()> {
    for (p, &c) in src.iter().enumerate() {
        if c == 0 || p + shift >= dst.len() {
            continue;
        }
        dst[p + shift] = dst[p + shift]
            .checked_add(c)
            .ok_or_else(|| Error::Numeric("term count overflow".into()))?;
    }
    Ok(())
}

/// Multiply out Π(1 + x σ_a σ_b) factor by factor, reducing spin exponents mod 2 after every
/// factor and truncating at x^order. With `require_center`, terms whose unreduced product
/// never contained that spin are dropped at the end. No term is discarded for being odd.
pub fn expand_and_reduce(
    factors: &[BondFactor],
    order: usize,
    require_center: Option<u32>,
    state_budget: usize,
) -> Result<Expansion> {
    let mut order = order;
    let mut states: HashMap<Key, Vec<u128>> = HashMap::new();
    let mut unit = vec![0u128; order + 1];
    unit[0] = 1;
    states.insert((Vec::new(), false), unit);
    for f in factors {
        let mut next = std::mem::take(&mut states);
        if order > 0 {
            let hit = require_center.is_some_and(|c| f.a == c || f.b == c);
            let taken: Vec<(Key, Vec<u128>)> = next
                .iter()
                .map(|((odd, touched), coeffs)| {
                    let mut shifted = vec![0u128; order + 1];
                    shifted[1..].copy_from_slice(&coeffs[..order]);
                    ((toggle(odd, f.a, f.b), *touched || hit), shifted)
                })
                .collect();
            for (key, c) in taken {
                add_into(next.entry(key).or_insert_with(|| vec![0u128; order + 1]), &c, 0)?;
            }
        }
        next.retain(|_, c| c.iter().any(|&v| v != 0));
        while next.len() > state_budget {
            if order == 0 {
                return Err(Error::Budget {
                    what: format!("expansion exceeded {state_budget} states"),
                    reached: 0,
                });
            }
            order -= 1;
            for c in next.values_mut() {
                c.truncate(order + 1);
            }
            next.retain(|_, c| c.iter().any(|&v| v != 0));
        }
        states = next;
    }
    let mut monomials = Vec::new();
    for ((odd, touched), coeffs) in states {
        if require_center.is_some() && !touched {
            continue;
        }
        for (p, c) in coeffs.into_iter().enumerate() {
            if c != 0 {
                monomials.push(SpinMonomial {
                    odd_sites: odd.clone(),
                    x_power: p,
                    touches_center: touched,
                    count: BigInt::from(c),
                });
            }
        }
    }
    monomials.sort();
    Ok(Expansion { monomials, order })
}

/// Sum over all spin configurations divided by 2^N: a monomial with any odd site averages
/// to zero, an all-even one to 1. Returns coefficients of x^0..=order.
pub fn sum_over_configurations(monomials: &[SpinMonomial], order: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); order + 1];
    for m in monomials {
        if m.odd_sites.is_empty() && m.x_power <= order {
            out[m.x_power] += &m.count;
        }
    }
    out
}
