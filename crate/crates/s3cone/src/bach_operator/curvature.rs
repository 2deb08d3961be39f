//! Curvature and the Bach tensor of a metric from its Taylor jet.
//!
//! R^m_{ijl} = ∂_iΓ^m_{jl} − ∂_jΓ^m_{il} + Γ^m_{ip}Γ^p_{jl} − Γ^m_{jp}Γ^p_{il},
//! R_{ijkl} = g_{km}R^m_{ijl} (the round sphere has R_{ijij} > 0),
//! Rc_{jl} = R^i_{ijl}, A = ½(Rc − R g/6), W = Rm − A ⊙ g.

use serde::Serialize;

use crate::bach_operator::jet::{invert, Jet};
use crate::cone_calculus::{unpack, SYM4};
use crate::error::{Error, Result};

fn i2(i: usize, j: usize) -> usize {
    4 * i + j
}

fn i4(i: usize, j: usize, k: usize, l: usize) -> usize {
    ((4 * i + j) * 4 + k) * 4 + l
}

/// Christoffel symbols and curvature jets at one point.
pub(crate) struct Geometry {
    pub g: Vec<Jet>,
    pub ginv: Vec<Jet>,
    /// gamma[i4(0, m, i, j)] = Γ^m_ij (first slot unused)
    pub gamma: Vec<Jet>,
    pub rm: Vec<Jet>,
    pub rc: Vec<Jet>,
    pub r: Jet,
    pub a: Vec<Jet>,
    pub w: Vec<Jet>,
}

fn gam(gamma: &[Jet], m: usize, i: usize, j: usize) -> &Jet {
    &gamma[i4(0, m, i, j)]
}

impl Geometry {
    pub fn new(jet: &[Jet; 10], point: [f64; 4]) -> Result<Self> {
        let deg = jet[0].degree();
        if deg < 2 {
            return Err(Error::Invalid("curvature needs a metric jet of degree >= 2".into()));
        }
        let mut gm: [[Jet; 4]; 4] = std::array::from_fn(|_| std::array::from_fn(|_| Jet::zero(deg)));
        for (s, &(i, j)) in SYM4.iter().enumerate() {
            gm[i][j] = jet[s].clone();
            gm[j][i] = jet[s].clone();
        }
        let m0 = unpack(&jet.clone().map(|j| j.value()));
        let pd = nalgebra::Matrix4::from_fn(|i, j| m0[i][j]).symmetric_eigenvalues().min() > 0.0;
        let inv = match (pd, invert(&gm)) {
            (true, Some(inv)) => inv,
            _ => return Err(Error::Singular { point }),
        };
        let g: Vec<Jet> = (0..16).map(|n| gm[n / 4][n % 4].clone()).collect();
        let ginv: Vec<Jet> = (0..16).map(|n| inv[n / 4][n % 4].clone()).collect();
        let dg: Vec<Jet> = (0..64).map(|n| g[n % 16].partial(n / 16)).collect();
        let d = |a: usize, i: usize, j: usize| &dg[16 * a + i2(i, j)];
        let mut gamma = vec![Jet::zero(deg - 1); 256];
        for m in 0..4 {
            for i in 0..4 {
                for j in i..4 {
                    let mut s = Jet::zero(deg - 1);
                    for k in 0..4 {
                        let t = d(i, k, j).add(d(j, k, i)).sub(d(k, i, j));
                        s = s.add(&ginv[i2(m, k)].mul(&t));
                    }
                    let s = s.scale(0.5);
                    gamma[i4(0, m, j, i)] = s.clone();
                    gamma[i4(0, m, i, j)] = s;
                }
            }
        }
        let dgamma: Vec<Vec<Jet>> = (0..4).map(|a| (0..64).map(|n| gamma[n].partial(a)).collect()).collect();
        // R^m_{ijl} stored at i4(m, i, j, l)
        let mut rup = vec![Jet::zero(deg - 2); 256];
        for m in 0..4 {
            for i in 0..4 {
                for j in 0..4 {
                    for l in 0..4 {
                        let mut s = dgamma[i][i4(0, m, j, l)].sub(&dgamma[j][i4(0, m, i, l)]);
                        for p in 0..4 {
                            s = s.add(&gam(&gamma, m, i, p).mul(gam(&gamma, p, j, l)));
                            s = s.sub(&gam(&gamma, m, j, p).mul(gam(&gamma, p, i, l)));
                        }
                        rup[i4(m, i, j, l)] = s;
                    }
                }
            }
        }
        let mut rm = vec![Jet::zero(deg - 2); 256];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let mut s = Jet::zero(deg - 2);
                        for m in 0..4 {
                            s = s.add(&g[i2(k, m)].mul(&rup[i4(m, i, j, l)]));
                        }
                        rm[i4(i, j, k, l)] = s;
                    }
                }
            }
        }
        let mut rc = vec![Jet::zero(deg - 2); 16];
        for j in 0..4 {
            for l in 0..4 {
                let mut s = Jet::zero(deg - 2);
                for i in 0..4 {
                    s = s.add(&rup[i4(i, i, j, l)]);
                }
                rc[i2(j, l)] = s;
            }
        }
        let mut r = Jet::zero(deg - 2);
        for n in 0..16 {
            r = r.add(&ginv[n].mul(&rc[n]));
        }
        let a: Vec<Jet> = (0..16).map(|n| rc[n].sub(&r.mul(&g[n]).scale(1.0 / 6.0)).scale(0.5)).collect();
        let mut w = vec![Jet::zero(deg - 2); 256];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let kn = a[i2(i, k)]
                            .mul(&g[i2(j, l)])
                            .add(&a[i2(j, l)].mul(&g[i2(i, k)]))
                            .sub(&a[i2(i, l)].mul(&g[i2(j, k)]))
                            .sub(&a[i2(j, k)].mul(&g[i2(i, l)]));
                        w[i4(i, j, k, l)] = rm[i4(i, j, k, l)].sub(&kn);
                    }
                }
            }
        }
        Ok(Self { g, ginv, gamma, rm, rc, r, a, w })
    }

    /// ∇ of a covariant tensor of rank `rank` (4^rank jets); the new
    /// derivative index comes first.
    pub fn covariant(&self, t: &[Jet], rank: usize) -> Vec<Jet> {
        let size = 4usize.pow(rank as u32);
        let deg = t[0].degree().saturating_sub(1);
        let mut out = Vec::with_capacity(4 * size);
        for a in 0..4 {
            for n in 0..size {
                let mut s = t[n].partial(a);
                for slot in 0..rank {
                    let stride = 4usize.pow((rank - 1 - slot) as u32);
                    let is = (n / stride) % 4;
                    for p in 0..4 {
                        let np = n - is * stride + p * stride;
                        s = s.sub(&gam(&self.gamma, p, a, is).truncate(deg).mul(&t[np]));
                    }
                }
                out.push(s);
            }
        }
        out
    }

    pub fn values(v: &[Jet]) -> Vec<f64> {
        v.iter().map(Jet::value).collect()
    }
}

/// Curvature values at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointCurvature {
    pub rm: Vec<f64>,
    pub rc: Vec<f64>,
    pub r: f64,
    pub w: Vec<f64>,
    pub a: Vec<f64>,
}

impl PointCurvature {
    pub fn from_jet(jet: &[Jet; 10], point: [f64; 4]) -> Result<Self> {
        let geo = Geometry::new(jet, point)?;
        Ok(Self {
            rm: Geometry::values(&geo.rm),
            rc: Geometry::values(&geo.rc),
            r: geo.r.value(),
            w: Geometry::values(&geo.w),
            a: Geometry::values(&geo.a),
        })
    }

    /// Largest violation of R_ijkl = −R_jikl = −R_ijlk = R_klij.
    pub fn symmetry_defect(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    for l in 0..4 {
                        let v = self.rm[i4(i, j, k, l)];
                        m = m
                            .max((v + self.rm[i4(j, i, k, l)]).abs())
                            .max((v + self.rm[i4(i, j, l, k)]).abs())
                            .max((v - self.rm[i4(k, l, i, j)]).abs());
                    }
                }
            }
        }
        m
    }

    /// Largest trace of W over the (1,3) pair; with the flat-ish metrics
    /// used here the metric trace is taken with δ to first order.
    pub fn weyl_trace(&self, ginv: &[f64; 16]) -> f64 {
        let mut m = 0.0f64;
        for j in 0..4 {
            for l in 0..4 {
                let s: f64 = (0..4).flat_map(|i| (0..4).map(move |k| (i, k))).map(|(i, k)| ginv[i2(i, k)] * self.w[i4(i, j, k, l)]).sum();
                m = m.max(s.abs());
            }
        }
        m
    }

    pub fn max_abs(&self) -> f64 {
        self.rm.iter().chain(&self.rc).chain(&self.w).chain(&self.a).chain([&self.r]).fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// The Bach tensor at one point by two routes, plus the linear
/// Bianchi-reduced expression.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BachPoint {
    /// ∇^k∇^l W_ikjl + ½R^{kl}W_ikjl
    pub divergence_form: [f64; 10],
    /// ΔA_ij − ∇^k∇_i A_jk + ½R^{kl}W_ikjl
    pub schouten_form: [f64; 10],
    /// ½(ΔRc − ΔR g/6 − ∇²R/3), exact to first order in the curvature
    pub reduced_linear: [f64; 10],
    pub scalar_curvature: f64,
}

fn pack_matrix(m: &[f64]) -> [f64; 10] {
    SYM4.map(|(i, j)| 0.5 * (m[i2(i, j)] + m[i2(j, i)]))
}

pub fn bach_from_jet(jet: &[Jet; 10], point: [f64; 4]) -> Result<BachPoint> {
    if jet[0].degree() < 4 {
        return Err(Error::Invalid("the Bach tensor needs a metric jet of degree 4".into()));
    }
    let geo = Geometry::new(jet, point)?;
    let gi: Vec<f64> = Geometry::values(&geo.ginv);
    let g0: Vec<f64> = Geometry::values(&geo.g);
    let w0 = Geometry::values(&geo.w);
    let rc0 = Geometry::values(&geo.rc);
    let mut rup = [0.0; 16];
    for k in 0..4 {
        for l in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    rup[i2(k, l)] += gi[i2(k, a)] * gi[i2(l, b)] * rc0[i2(a, b)];
                }
            }
        }
    }
    let mut quad = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                for l in 0..4 {
                    quad[i2(i, j)] += 0.5 * rup[i2(k, l)] * w0[i4(i, k, j, l)];
                }
            }
        }
    }
    // ∇∇W stored [b][a][i][k][j][l] = ∇_b∇_a W_ikjl
    let dw = geo.covariant(&geo.w, 4);
    let ddw = Geometry::values(&geo.covariant(&dw, 5));
    let mut b1 = quad;
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                for l in 0..4 {
                    for b in 0..4 {
                        for a in 0..4 {
                            let c = gi[i2(k, b)] * gi[i2(l, a)];
                            if c != 0.0 {
                                s += c * ddw[(b * 4 + a) * 256 + i4(i, k, j, l)];
                            }
                        }
                    }
                }
            }
            b1[i2(i, j)] += s;
        }
    }
    let da = geo.covariant(&geo.a, 2);
    let dda = Geometry::values(&geo.covariant(&da, 3)); // [b][a][i][j]
    let mut b2 = quad;
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for a in 0..4 {
                for b in 0..4 {
                    s += gi[i2(b, a)] * dda[i4(b, a, i, j)];
                    // ∇^k∇_i A_jk with k raised on the outer derivative
                    s -= gi[i2(a, b)] * dda[i4(b, i, j, a)];
                }
            }
            b2[i2(i, j)] += s;
        }
    }
    let drc = geo.covariant(&geo.rc, 2);
    let ddrc = Geometry::values(&geo.covariant(&drc, 3));
    let dr = geo.covariant(std::slice::from_ref(&geo.r), 0);
    let ddr = Geometry::values(&geo.covariant(&dr, 1)); // [b][a]
    let lap_r: f64 = (0..16).map(|n| gi[n] * ddr[n]).sum();
    let mut red = [0.0; 16];
    for i in 0..4 {
        for j in 0..4 {
            let lap_rc: f64 = (0..4).flat_map(|a| (0..4).map(move |b| (a, b))).map(|(a, b)| gi[i2(a, b)] * ddrc[i4(a, b, i, j)]).sum();
            red[i2(i, j)] = 0.5 * (lap_rc - lap_r * g0[i2(i, j)] / 6.0 - ddr[i2(i, j)] / 3.0);
        }
    }
    Ok(BachPoint {
        divergence_form: pack_matrix(&b1),
        schouten_form: pack_matrix(&b2),
        reduced_linear: pack_matrix(&red),
        scalar_curvature: geo.r.value(),
    })
}
