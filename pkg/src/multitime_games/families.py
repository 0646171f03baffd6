"""Declarative coefficient families for dynamics, running costs and terminal costs.

A family is a per-direction list of polynomial maps on the concatenated
variable blocks (t, x, u, v).  Everything is stored as explicit monomials so
that game definitions are serializable and runs reproducible; the named
constructors (`constant`, `affine_state`, `bilinear_controls`) are sugar over
the same representation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_TOTAL_DEGREE = 3

# variable blocks, in storage order
_BLOCK_NAMES = ("t", "x", "u", "v")


def _as_terms(raw):
    """Normalize nested term lists to tuples of (coeff, powers)."""
    out = []
    for per_dir in raw:
        dir_terms = []
        for per_out in per_dir:
            comp = tuple(
                (float(c), tuple(int(e) for e in pw)) for c, pw in per_out
            )
            dir_terms.append(comp)
        out.append(tuple(dir_terms))
    return tuple(out)


@dataclass(frozen=True)
class Family:
    """Polynomial map evaluated per direction.

    blocks  -- sizes (mt, nx, pu, qv) of the t, x, u, v variable blocks;
               a zero size means the map ignores that block entirely.
    outputs -- number of output components (n for dynamics, 1 for costs).
    terms   -- terms[direction][output] is a tuple of (coeff, powers) with
               len(powers) == sum(blocks); total degree per term <= 3.
    """

    kind: str
    blocks: tuple[int, int, int, int]
    outputs: int
    terms: tuple

    def __post_init__(self):
        nvars = sum(self.blocks)
        if self.outputs < 1:
            raise ValueError("family needs at least one output component")
        if not self.terms:
            raise ValueError("family needs at least one direction")
        for per_dir in self.terms:
            if len(per_dir) != self.outputs:
                raise ValueError(
                    f"direction has {len(per_dir)} components, expected {self.outputs}"
                )
            for comp in per_dir:
                for coeff, powers in comp:
                    if not np.isfinite(coeff):
                        raise ValueError("non-finite coefficient in family")
                    if len(powers) != nvars:
                        raise ValueError(
                            f"term exponent vector has length {len(powers)}, "
                            f"expected {nvars}"
                        )
                    if any(e < 0 for e in powers):
                        raise ValueError("negative exponent in family term")
                    if sum(powers) > MAX_TOTAL_DEGREE:
                        raise ValueError(
                            f"term total degree {sum(powers)} exceeds "
                            f"{MAX_TOTAL_DEGREE}"
                        )
        # dense (coeffs, exponents) arrays per component, for fast evaluation
        packed = []
        for per_dir in self.terms:
            packed.append(tuple(
                (np.array([c for c, _ in comp], dtype=float),
                 np.array([pw for _, pw in comp], dtype=np.int64).reshape(len(comp), nvars))
                for comp in per_dir
            ))
        object.__setattr__(self, "_packed", tuple(packed))

    @property
    def directions(self) -> int:
        return len(self.terms)

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, values, blocks) -> "Family":
        """values[direction][output] -> that constant."""
        values = np.asarray(values, dtype=float)
        if values.ndim != 2:
            raise ValueError("constant family expects a (directions, outputs) array")
        nvars = sum(blocks)
        zero = tuple([0] * nvars)
        terms = [
            [[(v, zero)] if v != 0.0 else [] for v in per_dir]
            for per_dir in values
        ]
        return cls("constant", tuple(blocks), values.shape[1], _as_terms(terms))

    @classmethod
    def affine_state(cls, linear, offset=None, *, blocks) -> "Family":
        """out = linear[d] @ x + offset[d], no control dependence."""
        linear = np.asarray(linear, dtype=float)
        if linear.ndim != 3:
            raise ValueError(
                "affine family expects linear of shape (directions, outputs, n)"
            )
        dirs, outs, nx = linear.shape
        mt, nx_b, pu, qv = blocks
        if nx != nx_b:
            raise ValueError(f"linear state width {nx} != block size {nx_b}")
        if offset is None:
            offset = np.zeros((dirs, outs))
        offset = np.asarray(offset, dtype=float)
        nvars = sum(blocks)
        terms = []
        for d in range(dirs):
            per_dir = []
            for o in range(outs):
                comp = []
                if offset[d, o] != 0.0:
                    comp.append((offset[d, o], tuple([0] * nvars)))
                for j in range(nx):
                    if linear[d, o, j] != 0.0:
                        pw = [0] * nvars
                        pw[mt + j] = 1
                        comp.append((linear[d, o, j], tuple(pw)))
                per_dir.append(comp)
            terms.append(per_dir)
        return cls("affine-in-x", tuple(blocks), outs, _as_terms(terms))

    @classmethod
    def bilinear_controls(cls, quad, state_linear=None, offset=None, *, blocks) -> "Family":
        """out = sum_ab quad[d,o,a,b] u_a v_b + state_linear[d,o] @ x + offset[d,o]."""
        quad = np.asarray(quad, dtype=float)
        if quad.ndim != 4:
            raise ValueError(
                "bilinear family expects quad of shape (directions, outputs, p, q)"
            )
        dirs, outs, p, q = quad.shape
        mt, nx, pu, qv = blocks
        if (p, q) != (pu, qv):
            raise ValueError(f"quad control shape {(p, q)} != blocks {(pu, qv)}")
        nvars = sum(blocks)
        if state_linear is not None:
            state_linear = np.asarray(state_linear, dtype=float)
        if offset is not None:
            offset = np.asarray(offset, dtype=float)
        terms = []
        for d in range(dirs):
            per_dir = []
            for o in range(outs):
                comp = []
                if offset is not None and offset[d, o] != 0.0:
                    comp.append((offset[d, o], tuple([0] * nvars)))
                if state_linear is not None:
                    for j in range(nx):
                        if state_linear[d, o, j] != 0.0:
                            pw = [0] * nvars
                            pw[mt + j] = 1
                            comp.append((state_linear[d, o, j], tuple(pw)))
                for a in range(p):
                    for b in range(q):
                        if quad[d, o, a, b] != 0.0:
                            pw = [0] * nvars
                            pw[mt + nx + a] = 1
                            pw[mt + nx + pu + b] = 1
                            comp.append((quad[d, o, a, b], tuple(pw)))
                per_dir.append(comp)
            terms.append(per_dir)
        return cls("bilinear-uv", tuple(blocks), outs, _as_terms(terms))

    @classmethod
    def polynomial(cls, terms, *, blocks, outputs) -> "Family":
        return cls("polynomial", tuple(blocks), outputs, _as_terms(terms))

    # -- evaluation -----------------------------------------------------------

    def evaluate(self, direction, t=None, x=None, u=None, v=None) -> np.ndarray:
        """Evaluate one direction's map.

        x may carry leading batch dimensions, shape (..., nx); t, u, v are
        single vectors.  Returns an array of shape (..., outputs).
        """
        mt, nx, pu, qv = self.blocks
        fixed = []
        for vec, size, name in ((t, mt, "t"), (u, pu, "u"), (v, qv, "v")):
            if size:
                arr = np.asarray(vec, dtype=float)
                if arr.shape != (size,):
                    raise ValueError(f"{name} has shape {arr.shape}, expected ({size},)")
                fixed.append(arr)
        zf = np.concatenate(fixed) if fixed else np.empty(0)

        if nx:
            x_arr = np.asarray(x, dtype=float)
            if x_arr.shape[-1] != nx:
                raise ValueError(f"x has trailing size {x_arr.shape[-1]}, expected {nx}")
            batch = x_arr.shape[:-1]
        else:
            x_arr = None
            batch = ()

        out = np.zeros(batch + (self.outputs,))
        for o, (coeffs, powers) in enumerate(self._packed[direction]):
            if coeffs.size == 0:
                continue
            pw_fix = np.concatenate([powers[:, :mt], powers[:, mt + nx:]], axis=1)
            factor = coeffs * np.prod(zf ** pw_fix, axis=1)
            if nx:
                pw_x = powers[:, mt:mt + nx]
                # (..., terms, nx) -> (..., terms)
                xpow = np.prod(x_arr[..., None, :] ** pw_x, axis=-1)
                out[..., o] = xpow @ factor
            else:
                out[..., o] = factor.sum()
        return out

    # -- serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "kind": "polynomial",
            "terms": [
                [
                    [{"coeff": c, "powers": list(pw)} for c, pw in comp]
                    for comp in per_dir
                ]
                for per_dir in self.terms
            ],
        }
