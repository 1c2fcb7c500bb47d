use crate::error::{Error, Result};
use crate::quantum::{ComplexMatrix, DensityMatrix, Generator, C64};

/// Singular values below this fraction of the largest (floored at 1) count as zero.
pub const NULL_SPACE_RTOL: f64 = 1e-10;
/// Eigenvalues of the fixed point below this are rejected as unphysical.
pub const STEADY_POSITIVITY_TOL: f64 = 1e-8;

/// Stationary state from the null space of the vectorized Liouvillian.
///
/// The null vector is taken from an SVD, rescaled to unit trace (which also removes its
/// arbitrary phase), then Hermitized and renormalized.
pub fn steady_state(gen: &Generator) -> Result<DensityMatrix> {
    let l = gen.liouvillian();
    let svd = l.as_nalgebra().clone().svd(false, true);
    let sv = &svd.singular_values;
    let scale = sv.max().max(1.0);
    let null_dim = sv.iter().filter(|&&s| s <= NULL_SPACE_RTOL * scale).count();
    if null_dim != 1 {
        return Err(Error::DegenerateNullSpace(null_dim));
    }
    let k = sv.imin();
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    // Rows of Vᴴ are conjugated right singular vectors.
    let v = v_t.row(k).transpose().map(|z| z.conj());
    let raw = ComplexMatrix::unstack(&v)?;
    let tr = raw.trace();
    if tr.norm() < 1e-8 {
        return Err(Error::NonPhysicalFixedPoint(0.0));
    }
    let rho = raw.scale(C64::new(1.0, 0.0) / tr).hermitian_part();
    let rho = rho.scale_real(1.0 / rho.trace().re);
    let min_eig = rho.hermitian_eigenvalues()[0];
    if min_eig < -STEADY_POSITIVITY_TOL {
        return Err(Error::NonPhysicalFixedPoint(min_eig));
    }
    Ok(DensityMatrix::new_unchecked(rho))
}

/// Eigenvalues of the vectorized Liouvillian (`N²` of them, with multiplicity), from a complex
/// Schur decomposition.
pub fn liouvillian_spectrum(gen: &Generator) -> Vec<C64> {
    let schur = gen.liouvillian().as_nalgebra().clone().schur();
    let (_, t) = schur.unpack();
    t.diagonal().iter().copied().collect()
}

/// Slowest nonzero decay rate `min −Re λ` over the Liouvillian spectrum.
pub fn spectral_gap(gen: &Generator) -> Option<f64> {
    let spectrum = liouvillian_spectrum(gen);
    let scale = spectrum.iter().map(|z| z.norm()).fold(1.0, f64::max);
    spectrum
        .iter()
        .filter(|z| z.norm() > 1e-9 * scale)
        .map(|z| -z.re)
        .filter(|&r| r > 0.0)
        .min_by(f64::total_cmp)
}
