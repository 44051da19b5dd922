//! Problem definition consumed by the driver.

use crate::levelset::Region;

/// Densities and viscosities of the two phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phases {
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
}

impl Phases {
    pub fn rho(&self, r: Region) -> f64 {
        match r {
            Region::Plus => self.rho_plus,
            Region::Minus => self.rho_minus,
        }
    }

    pub fn viscosity(&self) -> crate::gfm::Viscosity {
        crate::gfm::Viscosity { plus: self.mu_plus, minus: self.mu_minus }
    }
}

/// Analytic data of a convection-diffusion problem with an interface.
///
/// `components` is 1 for a scalar transported by [`Problem::velocity`] and 2
/// for a velocity field that advects itself and the interface.
pub trait Problem {
    fn phases(&self) -> Phases;

    fn components(&self) -> usize;

    /// Exact level set; the interface is its zero contour.
    fn phi(&self, x: f64, y: f64, t: f64) -> f64;

    /// Exact solution of component `c` in region `r`.
    fn exact(&self, r: Region, c: usize, x: f64, y: f64, t: f64) -> f64;

    /// Source term of component `c` in region `r`.
    fn source(&self, r: Region, c: usize, x: f64, y: f64, t: f64) -> f64;

    /// Flux jump `mu^+ du^+/dn - mu^- du^-/dn` of component `c` on the interface.
    fn flux_jump(&self, c: usize, x: f64, y: f64, t: f64) -> f64;

    /// Prescribed transport velocity, or `None` when the solution advects itself.
    fn velocity(&self, x: f64, y: f64, t: f64) -> Option<(f64, f64)>;

    /// Whether [`Problem::phi`] is a signed distance, so level-set errors are meaningful.
    fn phi_is_distance(&self) -> bool {
        true
    }

    /// Dirichlet data on the domain boundary.
    fn boundary(&self, c: usize, x: f64, y: f64, t: f64) -> f64 {
        self.exact(Region::of(self.phi(x, y, t)), c, x, y, t)
    }
}
