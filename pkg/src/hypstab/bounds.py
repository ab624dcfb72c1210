"""Covering-degree bound calculators for spine complexity.

Pure arithmetic over supplied counts (exact when given Fractions).  Each
calculator normalizes a vertex-count bound for a cover by its degree and
reports the large-degree limit:

* JSJ gluings: a degree d = h n^2 cover built from n-characteristic
  pieces has at most d v_A + 2 h n (v_B + v_D) + h v_C vertices, so the
  normalized count tends to v_A, the total complexity of the pieces.
* Dehn fillings: degree d = h n covers unwinding the filling torus give
  d v_A + h (v_B + v_D), normalized limit v_A.
* Seifert pieces: a circle bundle (Sigma, e) has complexity at most
  e + 6 chi_-(Sigma) + 6 and admits degree d^2 self-like covers
  unwrapping the fiber, so the normalized bound
  (e + 6 d chi_- + 6) / d^2 tends to zero.
"""

from __future__ import annotations

from dataclasses import dataclass


class BoundsError(ValueError):
    pass


@dataclass(frozen=True)
class CoverBound:
    bound: object          # raw vertex-count bound for the cover
    normalized: object     # bound / degree
    degree: object
    limit: object          # large-n limit of the normalized bound


def jsj_cover_bound(v_a, v_b, v_c, v_d, h, n) -> CoverBound:
    """Vertex budget d v_A + 2hn(v_B + v_D) + h v_C for a degree d = h n^2 cover.

    Normalized: v_A + 2(v_B + v_D)/n + v_C/n^2, with limit v_A.
    """
    for name, val in (("v_a", v_a), ("v_b", v_b), ("v_c", v_c), ("v_d", v_d),
                      ("h", h), ("n", n)):
        if val < 0:
            raise BoundsError(f"negative count {name}")
    if h < 1 or n < 1:
        raise BoundsError("need h >= 1 and n >= 1")
    d = h * n * n
    bound = d * v_a + 2 * h * n * (v_b + v_d) + h * v_c
    normalized = v_a + 2 * (v_b + v_d) / n + v_c / (n * n)
    return CoverBound(bound, normalized, d, v_a)


def filling_bound(v_a, v_b, v_d, n, h=1) -> CoverBound:
    """Vertex budget d v_A + h(v_B + v_D) for a degree d = h n filling cover.

    Normalized: v_A + (v_B + v_D)/n, with limit v_A; applied to the
    figure-eight complement (v_A = c(N) = 2) this caps the stable
    complexity of all its fillings by 2.
    """
    for name, val in (("v_a", v_a), ("v_b", v_b), ("v_d", v_d), ("n", n), ("h", h)):
        if val < 0:
            raise BoundsError(f"negative count {name}")
    if n < 1 or h < 1:
        raise BoundsError("need n >= 1 and h >= 1")
    d = h * n
    bound = d * v_a + h * (v_b + v_d)
    normalized = v_a + (v_b + v_d) / n
    return CoverBound(bound, normalized, d, v_a)


#: Figure-eight complement preset: two ideal tetrahedra dualize to a
#: two-vertex spine, and the inserted filling disc contributes the B/D
#: vertices of one meridian circle crossing the cusp cellulation.
FIGURE_EIGHT_FILLING = {"v_a": 2, "v_b": 4, "v_d": 2}


def chi_minus(chi) -> object:
    """max(-chi, 0), the negative-part Euler characteristic."""
    return max(-chi, 0 * chi)


def seifert_bound(e, chi, degrees) -> list[CoverBound]:
    """Normalized complexity bounds (e + 6 d chi_- + 6) / d^2 for circle
    bundles over a surface, one entry per degree; the sequence tends to 0."""
    if e < 0:
        raise BoundsError("Euler number must be nonnegative")
    out = []
    cm = chi_minus(chi)
    for d in degrees:
        if d < 1:
            raise BoundsError("degrees must be >= 1")
        bound = e + 6 * d * cm + 6
        out.append(CoverBound(bound, bound / (d * d), d * d, 0))
    return out
