//! The seven codes as linear-dispersion codes.
//!
//! A codeword is `power_scale · Σ_i (x_iR·A_i + x_iI·B_i)`, where `A_i`, `B_i`
//! are the dispersion matrices of the real and imaginary coordinate of symbol
//! `i`. The matrices are obtained by evaluating the printed codeword layout at
//! unit coordinate vectors; the layout is real-linear, so this recovers it
//! exactly.
//!
//! Symbols `x0..x3` form the coordinate-interleaved orthogonal core, symbols
//! `x4..` are the overlay placed in the empty slots of the core. The rate-1.5
//! and rate-7/4 codes are the rate-2 layouts with the trailing overlay symbols
//! fixed to zero.

use alloc::string::ToString;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::constellation::{self, make_qpsk, Constellation};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::math;

/// Block length of every code.
pub const BLOCK_LEN: usize = 4;

/// Symbols carried by the orthogonal core.
pub const CORE_SYMBOLS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeId {
    /// Rate-1 CIOD, four antennas.
    Q44,
    /// Rate-2, four antennas.
    X48,
    /// Rate-7/4, four antennas (`x7 = 0`).
    X47,
    /// Rate-1.5, four antennas (`x6 = x7 = 0`).
    X46,
    /// Rate-1 generalized CIOD, three antennas.
    Q34,
    /// Rate-2, three antennas.
    X38,
    /// Rate-1.5, three antennas.
    X36,
}

impl CodeId {
    pub const ALL: [CodeId; 7] =
        [CodeId::Q44, CodeId::X48, CodeId::X47, CodeId::X46, CodeId::Q34, CodeId::X38, CodeId::X36];

    pub fn name(self) -> &'static str {
        match self {
            CodeId::Q44 => "q44",
            CodeId::X48 => "x48",
            CodeId::X47 => "x47",
            CodeId::X46 => "x46",
            CodeId::Q34 => "q34",
            CodeId::X38 => "x38",
            CodeId::X36 => "x36",
        }
    }

    pub fn num_tx(self) -> usize {
        match self {
            CodeId::Q44 | CodeId::X48 | CodeId::X47 | CodeId::X46 => 4,
            CodeId::Q34 | CodeId::X38 | CodeId::X36 => 3,
        }
    }

    /// Number of information symbols per codeword.
    pub fn num_symbols(self) -> usize {
        match self {
            CodeId::Q44 | CodeId::Q34 => 4,
            CodeId::X46 | CodeId::X36 => 6,
            CodeId::X47 => 7,
            CodeId::X48 | CodeId::X38 => 8,
        }
    }

    pub fn lambda(self) -> usize {
        self.num_symbols() - CORE_SYMBOLS
    }

    /// Default overlay phase θ in degrees; irrelevant for the CIODs.
    pub fn default_theta_deg(self) -> f64 {
        match self {
            CodeId::Q44 | CodeId::Q34 => 0.0,
            CodeId::X48 | CodeId::X47 | CodeId::X46 => 90.0,
            CodeId::X38 => 13.91,
            CodeId::X36 => 45.0,
        }
    }

    /// QPSK rotation the code is designed for.
    pub fn default_rotation_deg(self) -> f64 {
        if self.num_tx() == 4 {
            constellation::CIOD_QPSK_ROTATION_DEG
        } else {
            constellation::GCIOD_QPSK_ROTATION_DEG
        }
    }
}

impl fmt::Display for CodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CodeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CodeId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownCode(s.to_string()))
    }
}

/// One complex entry of the interleaved symbol vector: `x_{aR} + j·x_{bI}`,
/// given as basis (coordinate) indices. Either half may be absent in the
/// reduced-rate codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InterleavedVar {
    pub re: Option<usize>,
    pub im: Option<usize>,
}

impl InterleavedVar {
    pub fn is_full(&self) -> bool {
        self.re.is_some() && self.im.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct CodeSpec {
    id: CodeId,
    num_tx: usize,
    theta_deg: f64,
    rotation_deg: f64,
    basis: Vec<ComplexMatrix>,
    power_scale: f64,
    vars: Vec<InterleavedVar>,
}

/// Coordinate index of the real part of symbol `i`.
#[inline]
pub const fn re_coord(i: usize) -> usize {
    2 * i
}

/// Coordinate index of the imaginary part of symbol `i`.
#[inline]
pub const fn im_coord(i: usize) -> usize {
    2 * i + 1
}

/// Interleaving pattern shared by both code families: `(real symbol, imag symbol)`.
const INTERLEAVING: [(usize, usize); 8] =
    [(0, 2), (1, 3), (2, 0), (3, 1), (4, 6), (5, 7), (6, 4), (7, 5)];

fn interleave(x: &[C64; 8], (r, i): (usize, usize)) -> C64 {
    C64::new(x[r].re, x[i].im)
}

/// Rate-2 four-antenna layout; `x` holds all eight symbols, unused ones zero.
fn four_antenna_layout(x: &[C64; 8], e: C64) -> [[C64; 4]; 4] {
    let [a, b, c, d, p, q, u, w] = INTERLEAVING.map(|pair| interleave(x, pair));
    [
        [a, b, e * p, e * q],
        [-b.conj(), a.conj(), -e * q.conj(), e * p.conj()],
        [u, w, c, d],
        [-w.conj(), u.conj(), -d.conj(), c.conj()],
    ]
}

/// Rate-2 three-antenna layout.
fn three_antenna_layout(x: &[C64; 8], e: C64) -> [[C64; 3]; 4] {
    let [a, b, c, d, p, q, u, w] = INTERLEAVING.map(|pair| interleave(x, pair));
    [
        [a, b, e * p],
        [-b.conj(), a.conj(), -e * q.conj()],
        [e * u, e * w, c],
        [-e * w.conj(), e * u.conj(), -d.conj()],
    ]
}

fn layout_matrix(num_tx: usize, x: &[C64; 8], e: C64) -> ComplexMatrix {
    if num_tx == 4 {
        ComplexMatrix::from_rows(&four_antenna_layout(x, e)).expect("4x4 layout")
    } else {
        ComplexMatrix::from_rows(&three_antenna_layout(x, e)).expect("4x3 layout")
    }
}

pub fn make_code(id: CodeId, theta_deg: f64) -> CodeSpec {
    CodeSpec::with_theta(id, theta_deg)
}

impl CodeSpec {
    /// Code with its default θ and rotation.
    pub fn new(id: CodeId) -> Self {
        Self::with_theta(id, id.default_theta_deg())
    }

    pub fn with_theta(id: CodeId, theta_deg: f64) -> Self {
        let num_tx = id.num_tx();
        let k = id.num_symbols();
        let theta_deg = if id.lambda() == 0 { 0.0 } else { theta_deg };
        let e = math::phasor_deg(theta_deg);
        let zero = C64::new(0.0, 0.0);
        let basis: Vec<ComplexMatrix> = (0..2 * k)
            .map(|coord| {
                let mut x = [zero; 8];
                x[coord / 2] = if coord % 2 == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 1.0) };
                layout_matrix(num_tx, &x, e)
            })
            .collect();
        // Every coordinate of a unit-energy circular constellation carries
        // power 1/2; normalize to unit power per antenna per channel use.
        let raw_power: f64 = basis.iter().map(|b| 0.5 * b.frobenius_norm_sq()).sum::<f64>()
            / (BLOCK_LEN * num_tx) as f64;
        let power_scale = 1.0 / math::sqrt(raw_power);
        let vars = INTERLEAVING
            .iter()
            .map(|&(r, i)| InterleavedVar {
                re: (r < k).then(|| re_coord(r)),
                im: (i < k).then(|| im_coord(i)),
            })
            .filter(|v| v.re.is_some() || v.im.is_some())
            .collect();
        Self { id, num_tx, theta_deg, rotation_deg: id.default_rotation_deg(), basis, power_scale, vars }
    }

    /// Parses a CLI code name; `theta_deg` of `None` keeps the default.
    pub fn from_name(name: &str, theta_deg: Option<f64>) -> Result<Self> {
        let id: CodeId = name.parse()?;
        Ok(Self::with_theta(id, theta_deg.unwrap_or(id.default_theta_deg())))
    }

    /// Same code at a different overlay phase.
    pub fn retheta(&self, theta_deg: f64) -> Self {
        let mut c = Self::with_theta(self.id, theta_deg);
        c.rotation_deg = self.rotation_deg;
        c
    }

    /// Overrides the QPSK rotation the code is paired with.
    pub fn with_rotation(mut self, rotation_deg: f64) -> Self {
        self.rotation_deg = rotation_deg;
        self
    }

    #[inline]
    pub fn id(&self) -> CodeId {
        self.id
    }

    #[inline]
    pub fn num_tx(&self) -> usize {
        self.num_tx
    }

    #[inline]
    pub fn block_len(&self) -> usize {
        BLOCK_LEN
    }

    #[inline]
    pub fn k_core(&self) -> usize {
        CORE_SYMBOLS
    }

    #[inline]
    pub fn lambda(&self) -> usize {
        self.id.lambda()
    }

    #[inline]
    pub fn k_total(&self) -> usize {
        self.id.num_symbols()
    }

    /// Symbols per channel use.
    pub fn rate(&self) -> f64 {
        self.k_total() as f64 / BLOCK_LEN as f64
    }

    #[inline]
    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    #[inline]
    pub fn rotation_deg(&self) -> f64 {
        self.rotation_deg
    }

    /// Unscaled dispersion matrices, indexed by [`re_coord`] / [`im_coord`].
    #[inline]
    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    #[inline]
    pub fn power_scale(&self) -> f64 {
        self.power_scale
    }

    /// Interleaved complex variables `x_{aR} + j·x_{bI}` that the equivalent
    /// channel acts on.
    #[inline]
    pub fn interleaved_vars(&self) -> &[InterleavedVar] {
        &self.vars
    }

    /// The QPSK constellation at this code's rotation.
    pub fn constellation(&self) -> Constellation {
        make_qpsk(self.rotation_deg)
    }

    fn check_len(&self, symbols: &[C64]) -> Result<()> {
        if symbols.len() != self.k_total() {
            return Err(Error::LengthMismatch { expected: self.k_total(), actual: symbols.len() });
        }
        Ok(())
    }

    /// Codeword at the printed scale, without `power_scale`. Minimum
    /// determinants are reported at this scale.
    pub fn raw_codeword(&self, symbols: &[C64]) -> Result<ComplexMatrix> {
        self.check_len(symbols)?;
        let mut x = ComplexMatrix::zeros(BLOCK_LEN, self.num_tx);
        for (i, s) in symbols.iter().enumerate() {
            accumulate(&mut x, &self.basis[re_coord(i)], s.re);
            accumulate(&mut x, &self.basis[im_coord(i)], s.im);
        }
        Ok(x)
    }

    /// Transmitted codeword, normalized to unit average power per antenna
    /// per channel use.
    pub fn encode(&self, symbols: &[C64]) -> Result<ComplexMatrix> {
        Ok(self.raw_codeword(symbols)?.scale_real(self.power_scale))
    }

    /// Unscaled contribution of symbol `i` taking value `s`.
    pub fn symbol_dispersion(&self, i: usize, s: C64) -> ComplexMatrix {
        let mut x = ComplexMatrix::zeros(BLOCK_LEN, self.num_tx);
        accumulate(&mut x, &self.basis[re_coord(i)], s.re);
        accumulate(&mut x, &self.basis[im_coord(i)], s.im);
        x
    }

    /// The interleaved symbol vector `v(s)`.
    pub fn interleaved_symbols(&self, symbols: &[C64]) -> Result<Vec<C64>> {
        self.check_len(symbols)?;
        let coord = |c: usize| if c % 2 == 0 { symbols[c / 2].re } else { symbols[c / 2].im };
        Ok(self
            .vars
            .iter()
            .map(|v| C64::new(v.re.map_or(0.0, coord), v.im.map_or(0.0, coord)))
            .collect())
    }

    /// True if basis matrix `coord` belongs to the orthogonal core.
    #[inline]
    pub fn is_core_coord(&self, coord: usize) -> bool {
        coord < 2 * CORE_SYMBOLS
    }
}

fn accumulate(acc: &mut ComplexMatrix, b: &ComplexMatrix, k: f64) {
    if k == 0.0 {
        return;
    }
    for (a, b) in acc.as_mut_slice().iter_mut().zip(b.as_slice()) {
        *a += b * k;
    }
}

/// `E‖encode(s)‖²_F / T` for i.i.d. symbols drawn uniformly from `c`, in
/// closed form from the constellation moments and basis inner products.
pub fn average_power_per_use(code: &CodeSpec, c: &Constellation) -> f64 {
    let m = c.len() as f64;
    let mean = c.points().iter().fold(C64::new(0.0, 0.0), |a, p| a + p) / m;
    let rr = c.points().iter().map(|p| p.re * p.re).sum::<f64>() / m;
    let ii = c.points().iter().map(|p| p.im * p.im).sum::<f64>() / m;
    let ri = c.points().iter().map(|p| p.re * p.im).sum::<f64>() / m;
    let coord_mean = |k: usize| if k % 2 == 0 { mean.re } else { mean.im };
    let inner = |a: &ComplexMatrix, b: &ComplexMatrix| -> f64 {
        a.as_slice().iter().zip(b.as_slice()).map(|(x, y)| (x.conj() * y).re).sum()
    };
    let basis = code.basis();
    let mut total = 0.0;
    for (ka, a) in basis.iter().enumerate() {
        for (kb, b) in basis.iter().enumerate() {
            let moment = if ka / 2 == kb / 2 {
                match (ka % 2, kb % 2) {
                    (0, 0) => rr,
                    (1, 1) => ii,
                    _ => ri,
                }
            } else {
                coord_mean(ka) * coord_mean(kb)
            };
            if moment != 0.0 {
                total += moment * inner(a, b);
            }
        }
    }
    total * code.power_scale() * code.power_scale() / BLOCK_LEN as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn sym(seed: &mut u64, n: usize) -> Vec<C64> {
        (0..n)
            .map(|_| {
                let mut nxt = || {
                    *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((*seed >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
                };
                C64::new(nxt(), nxt())
            })
            .collect()
    }

    #[test]
    fn names_round_trip_and_reject_unknown() {
        for id in CodeId::ALL {
            assert_eq!(id.name().parse::<CodeId>().unwrap(), id);
        }
        assert_eq!("X48".parse::<CodeId>().unwrap(), CodeId::X48);
        assert_eq!("bogus".parse::<CodeId>(), Err(Error::UnknownCode("bogus".into())));
    }

    #[test]
    fn rates() {
        let want = [1.0, 2.0, 1.75, 1.5, 1.0, 2.0, 1.5];
        for (id, r) in CodeId::ALL.into_iter().zip(want) {
            assert_eq!(CodeSpec::new(id).rate(), r, "{id}");
        }
    }

    #[test]
    fn q44_matches_printed_layout() {
        let code = CodeSpec::new(CodeId::Q44);
        let mut seed = 1;
        let s = sym(&mut seed, 4);
        let x = code.raw_codeword(&s).unwrap();
        let a = C64::new(s[0].re, s[2].im);
        let b = C64::new(s[1].re, s[3].im);
        let c = C64::new(s[2].re, s[0].im);
        let d = C64::new(s[3].re, s[1].im);
        let z = C64::new(0.0, 0.0);
        let want = ComplexMatrix::from_rows(&[
            [a, b, z, z],
            [-b.conj(), a.conj(), z, z],
            [z, z, c, d],
            [z, z, -d.conj(), c.conj()],
        ])
        .unwrap();
        assert!(x.max_abs_diff(&want) < 1e-15);
    }

    #[test]
    fn x38_overlay_entry() {
        let code = CodeSpec::with_theta(CodeId::X38, 13.91);
        let mut seed = 2;
        let s = sym(&mut seed, 8);
        let x = code.encode(&s).unwrap();
        let e = math::phasor_deg(13.91);
        let want = e * C64::new(s[4].re, s[6].im) * code.power_scale();
        assert!((x[(0, 2)] - want).norm() < 1e-14);
    }

    #[test]
    fn reduced_codes_zero_the_trailing_overlay() {
        let mut seed = 3;
        for (big, small) in [(CodeId::X48, CodeId::X46), (CodeId::X48, CodeId::X47), (CodeId::X38, CodeId::X36)] {
            for theta in [90.0, 45.0, 13.91] {
                let b = CodeSpec::with_theta(big, theta);
                let s = CodeSpec::with_theta(small, theta);
                let mut syms = sym(&mut seed, 8);
                for v in syms.iter_mut().skip(small.num_symbols()) {
                    *v = C64::new(0.0, 0.0);
                }
                let xs = s.raw_codeword(&syms[..small.num_symbols()]).unwrap();
                let xb = b.raw_codeword(&syms).unwrap();
                assert!(xs.max_abs_diff(&xb) < 1e-15);
            }
        }
        // With every overlay symbol zero the rate-2 code is the CIOD.
        let mut syms = sym(&mut seed, 8);
        for v in syms.iter_mut().skip(4) {
            *v = C64::new(0.0, 0.0);
        }
        let q = CodeSpec::new(CodeId::Q44).encode(&syms[..4]).unwrap();
        let x = CodeSpec::new(CodeId::X48).encode(&syms).unwrap();
        let ratio = CodeSpec::new(CodeId::Q44).power_scale() / CodeSpec::new(CodeId::X48).power_scale();
        assert!(q.max_abs_diff(&x.scale_real(ratio)) < 1e-14);
    }

    #[test]
    fn encode_is_linear_and_zero_at_zero() {
        let mut seed = 4;
        for id in CodeId::ALL {
            let code = CodeSpec::new(id);
            let k = code.k_total();
            let z = code.encode(&vec![C64::new(0.0, 0.0); k]).unwrap();
            assert_eq!(z.frobenius_norm_sq(), 0.0);
            let a = sym(&mut seed, k);
            let b = sym(&mut seed, k);
            let ab: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let lhs = code.encode(&ab).unwrap();
            let rhs = &code.encode(&a).unwrap() + &code.encode(&b).unwrap();
            assert!(lhs.max_abs_diff(&rhs) < 1e-14);
            assert!(matches!(code.encode(&a[..k - 1]), Err(Error::LengthMismatch { .. })));
        }
    }

    #[test]
    fn core_and_overlay_supports_are_disjoint() {
        for id in CodeId::ALL {
            let code = CodeSpec::new(id);
            let support = |core: bool| {
                let mut mask = vec![false; BLOCK_LEN * code.num_tx()];
                for (k, b) in code.basis().iter().enumerate() {
                    if code.is_core_coord(k) == core {
                        for (m, z) in mask.iter_mut().zip(b.as_slice()) {
                            *m |= z.norm() > 0.0;
                        }
                    }
                }
                mask
            };
            let core = support(true);
            let overlay = support(false);
            assert!(core.iter().zip(&overlay).all(|(a, b)| !(a & b)), "{id}");
        }
    }

    #[test]
    fn theta_only_moves_overlay_matrices() {
        for id in CodeId::ALL {
            let a = CodeSpec::with_theta(id, 10.0);
            let b = CodeSpec::with_theta(id, 70.0);
            for k in 0..2 * CORE_SYMBOLS {
                assert_eq!(a.basis()[k], b.basis()[k]);
            }
        }
    }

    #[test]
    fn q44_alamouti_blocks_are_orthogonal() {
        let code = CodeSpec::new(CodeId::Q44);
        let mut seed = 5;
        let s = sym(&mut seed, 4);
        let x = code.raw_codeword(&s).unwrap();
        for blk in [0, 2] {
            let sub = ComplexMatrix::from_fn(2, 2, |r, c| x[(blk + r, blk + c)]);
            let g = crate::linalg::gram(&sub);
            assert!(g[(0, 1)].norm() < 1e-14);
            assert!((g[(0, 0)] - g[(1, 1)]).norm() < 1e-14);
        }
    }

    /// Exhaustive average over every QPSK symbol vector.
    fn enumerated_power(code: &CodeSpec, c: &Constellation) -> f64 {
        let k = code.k_total();
        let m = c.len();
        let total = m.pow(k as u32);
        let mut acc = 0.0;
        let mut syms = vec![C64::new(0.0, 0.0); k];
        for n in 0..total {
            let mut r = n;
            for s in syms.iter_mut() {
                *s = c.points()[r % m];
                r /= m;
            }
            acc += code.encode(&syms).unwrap().frobenius_norm_sq();
        }
        acc / total as f64 / BLOCK_LEN as f64
    }

    #[test]
    fn power_normalization() {
        for id in CodeId::ALL {
            let code = CodeSpec::new(id);
            let c = code.constellation();
            let closed = average_power_per_use(&code, &c);
            assert!((closed - id.num_tx() as f64).abs() < 1e-12, "{id}: {closed}");
            assert!((enumerated_power(&code, &c) - closed).abs() < 1e-9, "{id}");
        }
        let q44 = CodeSpec::new(CodeId::Q44);
        assert!((q44.power_scale() - math::sqrt(2.0)).abs() < 1e-15);
        assert!((CodeSpec::new(CodeId::X48).power_scale() - 1.0).abs() < 1e-15);
        assert!((CodeSpec::new(CodeId::Q34).power_scale() - math::sqrt(2.0)).abs() < 1e-15);
        assert!((CodeSpec::new(CodeId::X38).power_scale() - 1.0).abs() < 1e-15);
        let c = q44.constellation();
        let doubled = Constellation::new(
            c.points().iter().map(|p| p * 2.0).collect(),
            c.labels().to_vec(),
            c.rotation_deg(),
        )
        .unwrap();
        let ratio = average_power_per_use(&q44, &doubled) / average_power_per_use(&q44, &c);
        assert!((ratio - 4.0).abs() < 1e-12);
    }
}
