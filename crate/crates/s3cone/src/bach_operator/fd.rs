//! Taylor jets of a sampled symmetric field by tensor-product central
//! differences on a lattice of spacing s around the base point.

use std::collections::HashMap;

use crate::bach_operator::jet::{exponent, Jet};
use crate::error::{Error, Result};
use crate::numerics::central_stencil;

/// Lattice half-width needed for all derivatives up to `deg`.
pub fn jet_radius(order: usize, deg: usize) -> usize {
    (1..=deg).map(|m| central_stencil(m, order).0).max().unwrap_or(0)
}

/// Euclidean reach (in lattice units) of the mixed stencils up to `deg`.
pub fn jet_reach(order: usize, deg: usize) -> f64 {
    let n = (deg + 1) * (deg + 2) * (deg + 3) * (deg + 4) / 24;
    (0..n)
        .map(|i| {
            exponent(i)
                .iter()
                .map(|&m| if m == 0 { 0.0 } else { (central_stencil(m as usize, order).0 as f64).powi(2) })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

pub fn check_order(order: usize) -> Result<()> {
    if order == 0 || order % 2 == 1 || order > 8 {
        return Err(Error::Invalid(format!("difference order {order} must be even and at most 8")));
    }
    Ok(())
}

/// Jets of the ten packed components.  `sample(o)` returns the field at
/// base + s·o and is called once per distinct lattice offset.
pub fn fd_jet(
    mut sample: impl FnMut([i32; 4]) -> Result<[f64; 10]>,
    spacing: f64,
    order: usize,
    deg: usize,
) -> Result<[Jet; 10]> {
    check_order(order)?;
    let stencils: Vec<(i32, Vec<f64>)> = (0..=deg)
        .map(|m| {
            if m == 0 {
                (0, vec![1.0])
            } else {
                let (s, w) = central_stencil(m, order);
                (s as i32, w)
            }
        })
        .collect();
    let mut cache: HashMap<[i32; 4], [f64; 10]> = HashMap::new();
    let base = sample([0; 4])?;
    cache.insert([0; 4], base);
    let n = (deg + 1) * (deg + 2) * (deg + 3) * (deg + 4) / 24;
    let mut derivs = vec![[0.0; 10]; n];
    for (i, d) in derivs.iter_mut().enumerate() {
        let e = exponent(i);
        let st: Vec<&(i32, Vec<f64>)> = e.iter().map(|&m| &stencils[m as usize]).collect();
        let total: usize = e.iter().map(|&m| m as usize).sum();
        let scale = spacing.powi(-(total as i32));
        for a in -st[0].0..=st[0].0 {
            let wa = st[0].1[(a + st[0].0) as usize];
            if wa == 0.0 {
                continue;
            }
            for b in -st[1].0..=st[1].0 {
                let wb = wa * st[1].1[(b + st[1].0) as usize];
                if wb == 0.0 {
                    continue;
                }
                for c in -st[2].0..=st[2].0 {
                    let wc = wb * st[2].1[(c + st[2].0) as usize];
                    if wc == 0.0 {
                        continue;
                    }
                    for dd in -st[3].0..=st[3].0 {
                        let w = wc * st[3].1[(dd + st[3].0) as usize];
                        if w == 0.0 {
                            continue;
                        }
                        let o = [a, b, c, dd];
                        let v = match cache.get(&o) {
                            Some(v) => *v,
                            None => {
                                let v = sample(o)?;
                                cache.insert(o, v);
                                v
                            }
                        };
                        // differencing against the base value keeps constants exact
                        let shift = if total == 0 { 0.0 } else { 1.0 };
                        for k in 0..10 {
                            d[k] += w * (v[k] - shift * base[k]) * scale;
                        }
                    }
                }
            }
        }
    }
    Ok(std::array::from_fn(|k| Jet::from_derivatives(&derivs.iter().map(|d| d[k]).collect::<Vec<_>>())))
}

/// Jet of an explicit field around x0.
pub fn fd_jet_at(
    f: impl Fn(&[f64; 4]) -> Result<[f64; 10]>,
    x0: &[f64; 4],
    spacing: f64,
    order: usize,
    deg: usize,
) -> Result<[Jet; 10]> {
    fd_jet(|o| f(&std::array::from_fn(|a| x0[a] + spacing * o[a] as f64)), spacing, order, deg)
}
