"""Fourier bases for combined shift operators and the associated transforms.

Every combined shift operator is circulant, so its eigenvectors can be written
down instead of solved for. The closed-form basis used throughout the
enhancement pipeline takes inverse-transform column m to be

    v_m[j] = exp(-2j * pi * j * m / n) / sqrt(n)

which is an eigenvector of any circulant with first row c, with eigenvalue
sum_d c[d] * exp(-2j * pi * d * m / n). For the order-k combined shift the
first row is k ones, so eigenvalue m is a partial geometric sum of roots of
unity. The forward matrix is the conjugate transpose of the inverse, making
the pair unitary: the forward transform of a frame equals sqrt(n) * ifft and
inverse and Parseval come for free. Low bins m correspond to slowly varying
eigenvectors, so speech energy piles up at small m.

A dense eigensolver route over the materialized matrix exists alongside the
closed form. It is the validation path: slower, basis unique only up to the
canonicalization applied here, but independent of the formula above.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .operators import CombinedShiftOperator, GraphSignalFrame, materialize

__all__ = [
    "GftBasis",
    "GraphSpectrum",
    "HalfSpectrum",
    "basis_circulant",
    "basis_dense",
    "gft",
    "igft",
    "gft_block",
    "igft_block",
    "half_spectrum",
    "expand_half",
    "RESIDUE_TOL",
]

# Largest imaginary part tolerated when an inverse transform should be real.
RESIDUE_TOL = 1e-9

# Eigenvector-matrix condition estimate above which the dense route warns.
_CONDITION_LIMIT = 1e8


class GftBasis:
    """Eigenbasis of a combined shift operator.

    kind is "circulant" for the closed form, "dense" for the eigensolver
    route, or "identity" for the k = 1 compatibility basis that leaves frames
    untouched. fast selects FFT kernels over explicit matrix products for the
    circulant kind; the matrices themselves are built lazily so a fast basis
    never holds an n-by-n array unless asked for one.
    """

    __slots__ = ("n", "k", "eigenvalues", "kind", "fast", "_forward", "_inverse")

    def __init__(
        self,
        n: int,
        k: int,
        eigenvalues: np.ndarray,
        kind: str,
        *,
        fast: bool = True,
        forward: np.ndarray | None = None,
        inverse: np.ndarray | None = None,
    ) -> None:
        if kind not in ("circulant", "dense", "identity"):
            raise ValueError(f"unknown basis kind: {kind!r}")
        eigenvalues = np.array(eigenvalues, dtype=np.complex128)
        if eigenvalues.shape != (n,):
            raise ValueError("need exactly one eigenvalue per vertex")
        eigenvalues.setflags(write=False)
        self.n = n
        self.k = k
        self.eigenvalues = eigenvalues
        self.kind = kind
        self.fast = fast
        self._forward = forward
        self._inverse = inverse

    @property
    def inverse(self) -> np.ndarray:
        """Matrix whose columns are the eigenvectors (spectrum back to frame)."""
        if self._inverse is None:
            if self.kind == "identity":
                self._inverse = np.eye(self.n, dtype=np.complex128)
            else:
                self._inverse = _fourier_columns(self.n)
        return self._inverse

    @property
    def forward(self) -> np.ndarray:
        """Inverse of the eigenvector matrix (frame to spectrum)."""
        if self._forward is None:
            # Unitary for the closed form, so inversion is conjugation.
            self._forward = self.inverse.conj().T.copy()
        return self._forward

    def __repr__(self) -> str:
        return f"GftBasis(n={self.n}, k={self.k}, kind={self.kind!r}, fast={self.fast})"


@dataclass(frozen=True)
class GraphSpectrum:
    """Complex transform coefficients of one frame, bin order m = 0 .. n-1.

    basis is None for spectra assembled by hand (e.g. expanded from a half
    spectrum); transforms check sizes either way.
    """

    coefficients: np.ndarray
    basis: GftBasis | None = None

    def __post_init__(self) -> None:
        coeff = np.array(self.coefficients, dtype=np.complex128)
        if coeff.ndim != 1 or coeff.size == 0:
            raise ValueError("spectrum coefficients must be a non-empty vector")
        if self.basis is not None and coeff.shape[0] != self.basis.n:
            raise ValueError(
                f"{coeff.shape[0]} coefficients do not fit a basis of size {self.basis.n}"
            )
        coeff.setflags(write=False)
        object.__setattr__(self, "coefficients", coeff)


@dataclass(frozen=True)
class HalfSpectrum:
    """Magnitudes of bins 0 .. n/2 plus the full phase vector of a spectrum.

    For spectra of real frames under the circulant basis the upper bins are
    conjugates of the lower ones, so magnitudes above n/2 are redundant while
    phases are kept whole for exact reconstruction.
    """

    magnitudes: np.ndarray
    phases: np.ndarray

    def __post_init__(self) -> None:
        mags = np.array(self.magnitudes, dtype=np.float64)
        phases = np.array(self.phases, dtype=np.float64)
        if mags.ndim != 1 or phases.ndim != 1:
            raise ValueError("half spectrum fields must be vectors")
        if np.any(mags < 0):
            raise ValueError("magnitudes must be nonnegative")
        if phases.shape[0] // 2 + 1 != mags.shape[0]:
            raise ValueError(
                f"{mags.shape[0]} magnitudes do not pair with {phases.shape[0]} phases"
            )
        mags.setflags(write=False)
        phases.setflags(write=False)
        object.__setattr__(self, "magnitudes", mags)
        object.__setattr__(self, "phases", phases)


def _fourier_columns(n: int) -> np.ndarray:
    j = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(j, j) / n) / np.sqrt(n)


@lru_cache(maxsize=64)
def basis_circulant(n: int, k: int, *, fast: bool = True, k1_identity: bool = False) -> GftBasis:
    """Closed-form basis for the order-k combined shift on n vertices.

    Eigenvalue m is sum_{d<k} exp(-2j*pi*d*m/n), computed for all m at once as
    the FFT of the first row. With k1_identity=True and k == 1 the basis is
    the identity transform instead; the combined shift is the identity matrix
    there, every basis diagonalizes it, and some spectrum dumps want raw
    samples back. Results are cached per argument tuple and safe to share.
    """
    if n < 2:
        raise ValueError(f"basis needs n >= 2, got n={n}")
    if not 1 <= k <= n:
        raise ValueError(f"combination order must satisfy 1 <= k <= n, got k={k} for n={n}")
    if k1_identity and k == 1:
        return GftBasis(n, 1, np.ones(n), "identity")
    first_row = np.zeros(n)
    first_row[:k] = 1.0
    eigenvalues = np.fft.fft(first_row)
    return GftBasis(n, k, eigenvalues, "circulant", fast=fast)


def basis_dense(op: CombinedShiftOperator) -> GftBasis:
    """Eigensolver basis over the materialized operator, for validation.

    Eigenvectors are normalized to unit length, phase-anchored so the first
    entry of largest magnitude is real positive, and sorted by eigenvalue
    angle then magnitude. Raises if the solver returns a rank-deficient
    eigenvector matrix; warns if its condition estimate exceeds 1e8.
    """
    matrix = materialize(op)
    eigenvalues, vectors = np.linalg.eig(matrix)
    vectors = vectors / np.linalg.norm(vectors, axis=0, keepdims=True)
    mags = np.abs(vectors)
    # argmax of (mags >= threshold) finds the first near-maximal entry, which
    # keeps the anchor stable when several entries tie up to rounding.
    anchor_rows = np.argmax(mags >= mags.max(axis=0, keepdims=True) * (1 - 1e-9), axis=0)
    anchors = vectors[anchor_rows, np.arange(op.n)]
    vectors = vectors * (np.conj(anchors) / np.abs(anchors))
    order = np.lexsort((np.abs(eigenvalues), np.angle(eigenvalues)))
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]
    if np.linalg.matrix_rank(vectors) < op.n:
        raise ValueError(
            f"operator (n={op.n}, k={op.k}) is numerically defective: "
            "eigenvectors do not span the space"
        )
    condition = np.linalg.cond(vectors)
    if condition > _CONDITION_LIMIT:
        warnings.warn(
            f"eigenvector matrix for (n={op.n}, k={op.k}) has condition estimate "
            f"{condition:.3e}; dense transforms may lose precision",
            RuntimeWarning,
            stacklevel=2,
        )
    forward = np.linalg.inv(vectors)
    return GftBasis(
        op.n, op.k, eigenvalues, "dense", fast=False, forward=forward, inverse=vectors
    )


def gft_block(basis: GftBasis, block: np.ndarray) -> np.ndarray:
    """Forward transform of frames stacked as rows. Returns complex rows."""
    block = np.asarray(block, dtype=np.float64)
    if block.shape[-1] != basis.n:
        raise ValueError(f"frame length {block.shape[-1]} does not match basis size {basis.n}")
    if basis.kind == "identity":
        return block.astype(np.complex128)
    if basis.kind == "circulant" and basis.fast:
        return np.fft.ifft(block, axis=-1, norm="ortho")
    return block @ basis.forward.T


def igft_block(basis: GftBasis, block: np.ndarray) -> np.ndarray:
    """Inverse transform of spectra stacked as rows. Returns real rows.

    The result must be real up to rounding; an imaginary residue above
    RESIDUE_TOL means the spectrum lost conjugate symmetry and is an error
    rather than something to discard silently.
    """
    block = np.asarray(block, dtype=np.complex128)
    if block.shape[-1] != basis.n:
        raise ValueError(f"spectrum length {block.shape[-1]} does not match basis size {basis.n}")
    if basis.kind == "identity":
        out = block
    elif basis.kind == "circulant" and basis.fast:
        out = np.fft.fft(block, axis=-1, norm="ortho")
    else:
        out = block @ basis.inverse.T
    residue = float(np.max(np.abs(out.imag), initial=0.0))
    if residue > RESIDUE_TOL:
        raise ValueError(
            f"inverse transform is not real: imaginary residue {residue:.3e} "
            f"exceeds {RESIDUE_TOL:.1e} (spectrum not conjugate-symmetric?)"
        )
    return np.ascontiguousarray(out.real)


def gft(basis: GftBasis, frame: GraphSignalFrame) -> GraphSpectrum:
    """Transform one frame into its spectrum under the given basis."""
    return GraphSpectrum(gft_block(basis, frame.values[None, :])[0], basis)


def igft(basis: GftBasis, spectrum: GraphSpectrum) -> GraphSignalFrame:
    """Transform a spectrum back into a real frame under the given basis."""
    if spectrum.basis is not None and spectrum.basis.n != basis.n:
        raise ValueError(
            f"spectrum of size {spectrum.basis.n} cannot invert through a basis of size {basis.n}"
        )
    values = igft_block(basis, spectrum.coefficients[None, :])[0]
    return GraphSignalFrame(values, CombinedShiftOperator(basis.n, basis.k))


def half_spectrum(spectrum: GraphSpectrum) -> HalfSpectrum:
    """Drop the redundant upper-bin magnitudes of a real frame's spectrum.

    Requires the circulant basis: its bins pair as m and n - m, so the upper
    magnitudes mirror the lower ones. Dense-eigensolver spectra have no such
    pairing after sorting and are rejected, as are odd frame lengths.
    """
    if spectrum.basis is None or spectrum.basis.kind != "circulant":
        raise ValueError("half spectrum needs a circulant basis: bin pairing is undefined otherwise")
    n = spectrum.coefficients.shape[0]
    if n % 2 != 0:
        raise ValueError(f"half spectrum needs an even frame length, got n={n}")
    coeff = spectrum.coefficients
    return HalfSpectrum(np.abs(coeff[: n // 2 + 1]), np.angle(coeff))


def expand_half(half: HalfSpectrum, n: int) -> GraphSpectrum:
    """Rebuild a full spectrum from half magnitudes and saved phases.

    Bin m takes magnitude min(m, n - m) from the half vector and its own
    saved phase, so expand_half(half_spectrum(s), n) reproduces any spectrum
    of a real frame exactly.
    """
    if n % 2 != 0 or n < 2:
        raise ValueError(f"full spectrum length must be even and positive, got n={n}")
    if half.phases.shape[0] != n:
        raise ValueError(f"saved phases have length {half.phases.shape[0]}, expected {n}")
    bins = np.arange(n)
    fold = np.minimum(bins, n - bins)
    coeff = half.magnitudes[fold] * np.exp(1j * half.phases)
    return GraphSpectrum(coeff, None)
