//! Recognition of structured tensor classes whose even-order members have
//! SOS forms.

mod b0;
mod cauchy;
mod dominance;
mod double_b;
mod extended_z;
mod h_tensor;
mod radius;
mod rows;

pub use b0::{b0_split, is_b0, B0Split};
pub use cauchy::{cauchy_cp_approximation, is_cauchy_psd, CpApproximation};
pub use dominance::{is_diagonally_dominated, is_weakly_diagonally_dominated};
pub use double_b::{
    double_b_quantities, is_double_b, is_mb0, is_quasi_double_b0, DoubleBQuantities, MVerdict,
};
pub use extended_z::{detect_extended_z, detect_extended_z_poly, BlockTag, ExtZBlock, ExtendedZReport};
pub use h_tensor::{is_h_tensor, HVerdict};
pub(crate) use radius::restrict;
pub use radius::{power_iteration, spectral_radius_nonnegative, spectral_radius_with, PowerOptions, SpectralRadius};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::tensor::SymmetricTensor;

/// Verdicts for every class a tensor can be tested against without solving
/// an SDP.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub order: usize,
    pub dim: usize,
    pub z_tensor: bool,
    pub diagonally_dominated: bool,
    pub weakly_diagonally_dominated: bool,
    pub b0: bool,
    pub double_b: bool,
    pub quasi_double_b0: bool,
    pub mb0: MVerdict,
    pub h_tensor: HVerdict,
    pub nonnegative_diagonal: bool,
    pub extended_z: ExtendedZReport,
    /// Classes above that force an SOS form (even order only).
    pub sos_implied_by: Vec<String>,
}

pub fn classify_all(a: &SymmetricTensor) -> Result<ClassificationReport> {
    let n = a.dim();
    let z_tensor = a.is_z_tensor();
    let diag = is_diagonally_dominated(a)?;
    let weak = is_weakly_diagonally_dominated(a)?;
    let b0 = is_b0(a)?;
    let double_b = is_double_b(a)?;
    let quasi = is_quasi_double_b0(a)?;
    let mb0 = is_mb0(a)?;
    let h = is_h_tensor(a)?;
    let nonneg_diag = (0..n).all(|i| a.diagonal(i) >= 0.0);
    let ext = detect_extended_z(a)?;
    let mut implied = Vec::new();
    if a.order() % 2 == 0 {
        for (name, flag) in [
            ("diagonally dominated", diag),
            ("weakly diagonally dominated", weak),
            ("B0", b0),
            ("double B", double_b),
            ("quasi-double B0", quasi),
            ("MB0", mb0.m_tensor),
            ("H-tensor with nonnegative diagonal", h.h_tensor && nonneg_diag),
        ] {
            if flag {
                implied.push(name.to_string());
            }
        }
    }
    Ok(ClassificationReport {
        order: a.order(),
        dim: n,
        z_tensor,
        diagonally_dominated: diag,
        weakly_diagonally_dominated: weak,
        b0,
        double_b,
        quasi_double_b0: quasi,
        mb0,
        h_tensor: h,
        nonnegative_diagonal: nonneg_diag,
        extended_z: ext,
        sos_implied_by: implied,
    })
}

impl ClassificationReport {
    pub fn to_text(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut s = format!("tensor of order {} and dimension {}\n", self.order, self.dim);
        s += &format!("Z-tensor                     {}\n", yn(self.z_tensor));
        s += &format!("diagonally dominated         {}\n", yn(self.diagonally_dominated));
        s += &format!("weakly diagonally dominated  {}\n", yn(self.weakly_diagonally_dominated));
        s += &format!("B0                           {}\n", yn(self.b0));
        s += &format!("double B                     {}\n", yn(self.double_b));
        s += &format!("quasi-double B0              {}\n", yn(self.quasi_double_b0));
        s += &format!(
            "MB0                          {}{}\n",
            yn(self.mb0.m_tensor),
            if self.mb0.boundary { " (boundary)" } else { "" }
        );
        s += &format!(
            "H-tensor                     {}{} (rho {:.6}, s {:.6})\n",
            yn(self.h_tensor.h_tensor),
            if self.h_tensor.boundary { " (boundary)" } else { "" },
            self.h_tensor.rho,
            self.h_tensor.s
        );
        s += &format!("nonnegative diagonal         {}\n", yn(self.nonnegative_diagonal));
        s += &format!("extended Z                   {}\n", yn(self.extended_z.holds));
        for b in &self.extended_z.blocks {
            let vars: Vec<String> = b.vars.iter().map(|v| (v + 1).to_string()).collect();
            s += &format!("  block {{{}}}: {:?}, {} mixed terms\n", vars.join(","), b.tag, b.mixed_terms);
        }
        if self.sos_implied_by.is_empty() {
            s += "SOS implied by: none\n";
        } else {
            s += &format!("SOS implied by: {}\n", self.sos_implied_by.join(", "));
        }
        s
    }
}
