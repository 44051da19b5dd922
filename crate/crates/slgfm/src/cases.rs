//! Manufactured-solution test problems.
//!
//! Each case supplies, per phase and component, the exact value, gradient,
//! Laplacian and time derivative. Sources and flux jumps are composed from
//! those pieces so that only the closed forms themselves are hand-written.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use slgfm_core::problem::{Phases, Problem};
use slgfm_core::Region;

/// Value and derivatives of one component in one phase.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
    pub lap: f64,
    pub dt: f64,
}

impl Jet {
    fn constant(value: f64) -> Self {
        Self { value, ..Default::default() }
    }

    fn add(self, o: Jet) -> Jet {
        Jet {
            value: self.value + o.value,
            dx: self.dx + o.dx,
            dy: self.dy + o.dy,
            lap: self.lap + o.lap,
            dt: self.dt + o.dt,
        }
    }
}

/// `log(r) = log((x - cx)^2 + (y - cy)^2) / 2` about a moving centre.
fn half_log(x: f64, y: f64, c: (f64, f64), c_dot: (f64, f64)) -> Jet {
    let (px, py) = (x - c.0, y - c.1);
    let r2 = px * px + py * py;
    Jet {
        value: 0.5 * r2.ln(),
        dx: px / r2,
        dy: py / r2,
        lap: 0.0,
        dt: -(px * c_dot.0 + py * c_dot.1) / r2,
    }
}

fn scaled(j: Jet, s: f64) -> Jet {
    Jet { value: s * j.value, dx: s * j.dx, dy: s * j.dy, lap: s * j.lap, dt: s * j.dt }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseId {
    /// Circle translating with velocity (1, 1).
    Translation,
    /// Five-petal flower rotating with unit angular velocity.
    Rotation,
    /// Circle deforming into an ellipse.
    Deformation,
    /// Self-advected velocity with a translating circle.
    NonlinearTranslation,
    /// Self-advected velocity with a circle of radius 1 orbiting the origin at
    /// radius 1.5. The second component's log term is centred at
    /// `(cos t, sin t)`, off the circle's centre, so `u` jumps across the
    /// interface.
    NonlinearRotation,
    /// As [`CaseId::NonlinearRotation`] with both log terms centred on the
    /// circle, which makes `u` continuous.
    NonlinearRotationCorrected,
}

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId::Translation,
        CaseId::Rotation,
        CaseId::Deformation,
        CaseId::NonlinearTranslation,
        CaseId::NonlinearRotation,
        CaseId::NonlinearRotationCorrected,
    ];

    pub fn number(self) -> &'static str {
        match self {
            CaseId::Translation => "1",
            CaseId::Rotation => "2",
            CaseId::Deformation => "3",
            CaseId::NonlinearTranslation => "4",
            CaseId::NonlinearRotation => "5",
            CaseId::NonlinearRotationCorrected => "5-corrected",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownCase(pub String);

impl fmt::Display for UnknownCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown test `{}` (expected 1, 2, 3, 4, 5 or 5-corrected)", self.0)
    }
}

impl std::error::Error for UnknownCase {}

impl FromStr for CaseId {
    type Err = UnknownCase;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        CaseId::ALL.into_iter().find(|c| c.number() == s.trim()).ok_or_else(|| UnknownCase(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestCase {
    pub id: CaseId,
}

impl TestCase {
    pub fn new(id: CaseId) -> Self {
        Self { id }
    }

    /// Square domain `[lo, hi]^2`.
    pub fn domain(&self) -> (f64, f64) {
        match self.id {
            CaseId::NonlinearRotation | CaseId::NonlinearRotationCorrected => (-3.0, 3.0),
            _ => (-2.0, 2.0),
        }
    }

    pub fn final_time(&self) -> f64 {
        match self.id {
            CaseId::Rotation | CaseId::NonlinearRotation | CaseId::NonlinearRotationCorrected => PI,
            _ => 1.0,
        }
    }

    /// `dt = dt_factor * dx`.
    pub fn dt_factor(&self) -> f64 {
        match self.id {
            CaseId::Translation => 0.4,
            CaseId::Rotation => 0.2,
            CaseId::Deformation => 0.1,
            CaseId::NonlinearTranslation => 0.2,
            CaseId::NonlinearRotation | CaseId::NonlinearRotationCorrected => 0.08,
        }
    }

    pub fn name(&self) -> &'static str {
        match self.id {
            CaseId::Translation => "scalar translation",
            CaseId::Rotation => "scalar rotation",
            CaseId::Deformation => "scalar deformation",
            CaseId::NonlinearTranslation => "nonlinear translation",
            CaseId::NonlinearRotation => "nonlinear rotation",
            CaseId::NonlinearRotationCorrected => "nonlinear rotation (centred log term)",
        }
    }

    /// A point inside the minus phase from which the interface is star-shaped.
    pub fn centre(&self, t: f64) -> (f64, f64) {
        match self.id {
            CaseId::Translation | CaseId::NonlinearTranslation => (t - 0.5, t - 0.5),
            CaseId::Rotation | CaseId::Deformation => (0.0, 0.0),
            CaseId::NonlinearRotation | CaseId::NonlinearRotationCorrected => (1.5 * t.cos(), 1.5 * t.sin()),
        }
    }

    /// Gradient of the exact level set.
    pub fn phi_gradient(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        match self.id {
            CaseId::Translation | CaseId::NonlinearTranslation => {
                let (px, py) = (x - t + 0.5, y - t + 0.5);
                let r = px.hypot(py);
                (px / r, py / r)
            }
            CaseId::Rotation => {
                let r = x.hypot(y);
                let th = y.atan2(x);
                // d/dtheta of -0.1 cos(5(theta - t))
                let dth = 0.5 * (5.0 * (th - t)).sin();
                let (ex, ey) = (x / r, y / r);
                (ex - dth * ey / r, ey + dth * ex / r)
            }
            CaseId::Deformation => {
                let (a, b) = (1.0 - 0.75 * t, 1.0 - 0.5 * t);
                let s = (a * x * x + b * y * y).sqrt();
                (a * x / s, b * y / s)
            }
            CaseId::NonlinearRotation | CaseId::NonlinearRotationCorrected => {
                let (px, py) = (x - 1.5 * t.cos(), y - 1.5 * t.sin());
                let r = px.hypot(py);
                (px / r, py / r)
            }
        }
    }

    /// Unit normal of the exact level set, pointing into the plus phase.
    pub fn normal(&self, x: f64, y: f64, t: f64) -> (f64, f64) {
        let (gx, gy) = self.phi_gradient(x, y, t);
        let n = gx.hypot(gy);
        (gx / n, gy / n)
    }

    pub fn jet(&self, r: Region, c: usize, x: f64, y: f64, t: f64) -> Jet {
        match self.id {
            CaseId::Translation => {
                let (px, py) = (x - t + 0.5, y - t + 0.5);
                match r {
                    Region::Minus => {
                        let value = -px * (px * px + py * py - 1.0);
                        let dx = -3.0 * px * px - py * py + 1.0;
                        let dy = -2.0 * px * py;
                        Jet { value, dx, dy, lap: -8.0 * px, dt: -(dx + dy) }
                    }
                    Region::Plus => {
                        let r2 = px * px + py * py;
                        let rr = r2.sqrt();
                        let r3 = r2 * rr;
                        let value = py / rr - py;
                        let dx = -px * py / r3;
                        let dy = px * px / r3 - 1.0;
                        Jet { value, dx, dy, lap: -py / r3, dt: -(dx + dy) }
                    }
                }
            }
            CaseId::Rotation => match r {
                Region::Minus => Jet { value: x * x + y * y - 1.0, dx: 2.0 * x, dy: 2.0 * y, lap: 4.0, dt: 0.0 },
                Region::Plus => {
                    let r2 = (x * x + y * y).max(1e-300);
                    let arg = 5.0 * (y.atan2(x) - t);
                    let cc = 0.1 * arg.cos();
                    let c1 = -0.5 * arg.sin();
                    let c2 = -25.0 * cc;
                    // g = c (2 + c) as a function of the polar angle
                    let g1 = 2.0 * c1 * (1.0 + cc);
                    let g2 = 2.0 * c2 * (1.0 + cc) + 2.0 * c1 * c1;
                    Jet { value: cc * (2.0 + cc), dx: -g1 * y / r2, dy: g1 * x / r2, lap: g2 / r2, dt: -g1 }
                }
            },
            CaseId::Deformation => match r {
                Region::Minus => {
                    let s = 1.0 - 0.625 * t;
                    Jet {
                        value: s * (x * x + y * y) + 4.0 * t - 1.0,
                        dx: 2.0 * s * x,
                        dy: 2.0 * s * y,
                        lap: 4.0 * s,
                        dt: -0.625 * (x * x + y * y) + 4.0,
                    }
                }
                Region::Plus => Jet {
                    value: 0.125 * t * (x * x - y * y) + 4.0 * t,
                    dx: 0.25 * t * x,
                    dy: -0.25 * t * y,
                    lap: 0.0,
                    dt: 0.125 * (x * x - y * y) + 4.0,
                },
            },
            CaseId::NonlinearTranslation => match r {
                Region::Minus => Jet::constant(1.0),
                Region::Plus => {
                    let l = half_log(x, y, (t - 0.5, t - 0.5), (1.0, 1.0));
                    let s = if c == 0 { 1.0 } else { -1.0 };
                    Jet::constant(1.0).add(scaled(l, s))
                }
            },
            CaseId::NonlinearRotation | CaseId::NonlinearRotationCorrected => {
                let base = if c == 0 {
                    Jet { value: -y, dy: -1.0, ..Default::default() }
                } else {
                    Jet { value: x, dx: 1.0, ..Default::default() }
                };
                match r {
                    Region::Minus => base,
                    Region::Plus => {
                        let radius = if c == 1 && self.id == CaseId::NonlinearRotation { 1.0 } else { 1.5 };
                        let centre = (radius * t.cos(), radius * t.sin());
                        let centre_dot = (-radius * t.sin(), radius * t.cos());
                        base.add(half_log(x, y, centre, centre_dot))
                    }
                }
            }
        }
    }

    fn transport(&self, r: Region, x: f64, y: f64, t: f64) -> (f64, f64) {
        match self.velocity(x, y, t) {
            Some(v) => v,
            None => (self.jet(r, 0, x, y, t).value, self.jet(r, 1, x, y, t).value),
        }
    }
}

impl Problem for TestCase {
    fn phases(&self) -> Phases {
        let (rho_plus, rho_minus, mu_plus, mu_minus) = match self.id {
            CaseId::Translation => (1.0, 1.0, 2.0, 1.0),
            CaseId::Rotation => (1.0, 100.0, 1.0, 10.0),
            CaseId::Deformation => (100.0, 1.0, 10.0, 1.0),
            CaseId::NonlinearTranslation => (1.0, 1000.0, 0.1, 10.0),
            CaseId::NonlinearRotation | CaseId::NonlinearRotationCorrected => (1000.0, 1.0, 10.0, 0.1),
        };
        Phases { rho_plus, rho_minus, mu_plus, mu_minus }
    }

    fn components(&self) -> usize {
        match self.id {
            CaseId::Translation | CaseId::Rotation | CaseId::Deformation => 1,
            _ => 2,
        }
    }

    fn phi(&self, x: f64, y: f64, t: f64) -> f64 {
        match self.id {
            CaseId::Translation | CaseId::NonlinearTranslation => (x - t + 0.5).hypot(y - t + 0.5) - 1.0,
            CaseId::Rotation => x.hypot(y) - 1.0 - 0.1 * (5.0 * (y.atan2(x) - t)).cos(),
            CaseId::Deformation => ((1.0 - 0.75 * t) * x * x + (1.0 - 0.5 * t) * y * y).sqrt() - 1.0,
            CaseId::NonlinearRotation | CaseId::NonlinearRotationCorrected => {
                (x - 1.5 * t.cos()).hypot(y - 1.5 * t.sin()) - 1.0
            }
        }
    }

    fn phi_is_distance(&self) -> bool {
        !matches!(self.id, CaseId::Rotation | CaseId::Deformation)
    }

    fn exact(&self, r: Region, c: usize, x: f64, y: f64, t: f64) -> f64 {
        self.jet(r, c, x, y, t).value
    }

    fn source(&self, r: Region, c: usize, x: f64, y: f64, t: f64) -> f64 {
        let j = self.jet(r, c, x, y, t);
        let (vx, vy) = self.transport(r, x, y, t);
        let ph = self.phases();
        let (rho, mu) = match r {
            Region::Plus => (ph.rho_plus, ph.mu_plus),
            Region::Minus => (ph.rho_minus, ph.mu_minus),
        };
        rho * (j.dt + vx * j.dx + vy * j.dy) - mu * j.lap
    }

    fn flux_jump(&self, c: usize, x: f64, y: f64, t: f64) -> f64 {
        let (nx, ny) = self.normal(x, y, t);
        let ph = self.phases();
        let p = self.jet(Region::Plus, c, x, y, t);
        let m = self.jet(Region::Minus, c, x, y, t);
        ph.mu_plus * (p.dx * nx + p.dy * ny) - ph.mu_minus * (m.dx * nx + m.dy * ny)
    }

    fn velocity(&self, x: f64, y: f64, t: f64) -> Option<(f64, f64)> {
        match self.id {
            CaseId::Translation => Some((1.0, 1.0)),
            CaseId::Rotation => Some((-y, x)),
            CaseId::Deformation => Some((3.0 * x / (8.0 - 6.0 * t), y / (4.0 - 2.0 * t))),
            _ => None,
        }
    }
}
