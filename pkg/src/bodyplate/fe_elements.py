"""Local finite elements and global degree-of-freedom maps.

Spaces
------
* Stress: a 42-dimensional nonconforming symmetric-matrix-valued element on
  tetrahedra with H(div)-type continuity imposed weakly through face traction
  moments.  The local space is sum_{i<j} P_ij t_ij t_ij^T over the six edges,
  with P_ij = P1 + (lam_i - lam_j) span{lam_l, lam_m} + lam_i lam_j P0 (l, m
  the complementary vertices).  Degrees of freedom: per face the nine moments
  (1/|F|) int_F (tau n) . (lam_a e_c) against the face's P1 basis and the three
  Cartesian directions, plus six interior mean values (1/|K|) int_K tau_ij.
  Its divergence lies in the discontinuous vector P1 space.
* Body displacement: vector P1 on tetrahedra, discontinuous (mixed method) or
  continuous (baseline).
* Plate: vector P1 (membrane) and the Morley element (deflection): quadratic,
  with vertex values and edge-midpoint normal derivatives as DOFs.

Shared-entity sign conventions live in the DOF maps: stress face DOFs use the
owner tet's outward normal and the face's P1 basis ordered by sorted global
vertex ids; Morley edge DOFs use the low-to-high global edge direction with
right-hand normal.  Local element constructions are purely local, so congruent
(translated) elements are identical and can be cached.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry_mesh import TET_LOCAL_FACES, TetMesh, TriMesh, FaceTag
from .quadrature import tet_rule, triangle_rule

__all__ = [
    "HuMaElement",
    "MorleyElement",
    "VectorP1Tet",
    "VectorP1Tri",
    "huma_stress_tet",
    "morley_tri",
    "lagrange_p1_tri_vector",
    "lagrange_p1_tet_vector_discontinuous",
    "lagrange_p1_tet_vector_continuous",
    "evaluate_stress_trace",
    "lower_morley_to_p1",
    "StressDofMap",
    "BodyDGDofMap",
    "BodyCGDofMap",
    "PlateDofMap",
    "tet_barycentric",
    "EDGE_PAIRS",
    "SYM_INDEX_PAIRS",
    "CONDITION_LIMIT",
]

#: The six tet edges (local vertex pairs, i < j).
EDGE_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]

#: Complementary vertex pairs for each edge.
_COMPLEMENT = [tuple(sorted(set(range(4)) - set(p))) for p in EDGE_PAIRS]

#: Component order of the interior moments / symmetric-matrix entries.
SYM_INDEX_PAIRS = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)]

#: DOF-matrix condition number beyond which element construction fails.
CONDITION_LIMIT = 1e12

_FACE_RULE = triangle_rule(4)
_INTERIOR_RULE = tet_rule(4)


def tet_barycentric(verts: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Barycentric coordinates of 3D points with respect to a tetrahedron."""
    points = np.atleast_2d(points)
    T = np.column_stack([verts[1] - verts[0], verts[2] - verts[0], verts[3] - verts[0]])
    sol = np.linalg.solve(T, (points - verts[0]).T).T
    lam0 = 1.0 - sol.sum(axis=1)
    return np.column_stack([lam0, sol])


def _tet_grad_lambda(verts: np.ndarray) -> tuple[np.ndarray, float]:
    """Gradients of the four barycentric functions and the tet volume."""
    T = np.column_stack([verts[1] - verts[0], verts[2] - verts[0], verts[3] - verts[0]])
    vol = np.linalg.det(T) / 6.0
    Tinv = np.linalg.inv(T)  # rows: gradients of lam_1..lam_3
    g = np.vstack([-Tinv.sum(axis=0), Tinv])
    return g, vol


def _tri_grad_lambda(verts: np.ndarray) -> tuple[np.ndarray, float]:
    T = np.column_stack([verts[1] - verts[0], verts[2] - verts[0]])
    area = np.linalg.det(T) / 2.0
    Tinv = np.linalg.inv(T)
    g = np.vstack([-Tinv.sum(axis=0), Tinv])
    return g, area


# ---------------------------------------------------------------------------
# Vector P1 elements.
# ---------------------------------------------------------------------------

class VectorP1Tri:
    """Vector-valued P1 on a physical triangle; local DOF (a, c) -> basis
    hat_a e_c at local index 2a + c."""

    n_dofs = 6

    def __init__(self, verts: np.ndarray):
        self.verts = np.asarray(verts, dtype=float)
        self.grad_lambda, self.area = _tri_grad_lambda(self.verts)

    def value(self, bary: np.ndarray) -> np.ndarray:
        """(nq, 6, 2) basis values at barycentric points."""
        bary = np.atleast_2d(bary)
        nq = bary.shape[0]
        out = np.zeros((nq, 6, 2))
        for a in range(3):
            for c in range(2):
                out[:, 2 * a + c, c] = bary[:, a]
        return out

    def gradient(self) -> np.ndarray:
        """(6, 2, 2) constant gradients d(basis_i)_r / dx_s."""
        out = np.zeros((6, 2, 2))
        for a in range(3):
            for c in range(2):
                out[2 * a + c, c, :] = self.grad_lambda[a]
        return out

    def strain(self) -> np.ndarray:
        g = self.gradient()
        return 0.5 * (g + np.swapaxes(g, 1, 2))


class VectorP1Tet:
    """Vector-valued P1 on a physical tetrahedron; local DOF (a, c) -> basis
    hat_a e_c at local index 3a + c."""

    n_dofs = 12

    def __init__(self, verts: np.ndarray):
        self.verts = np.asarray(verts, dtype=float)
        self.grad_lambda, self.volume = _tet_grad_lambda(self.verts)

    def value(self, bary: np.ndarray) -> np.ndarray:
        """(nq, 12, 3) basis values at barycentric points."""
        bary = np.atleast_2d(bary)
        nq = bary.shape[0]
        out = np.zeros((nq, 12, 3))
        for a in range(4):
            for c in range(3):
                out[:, 3 * a + c, c] = bary[:, a]
        return out

    def gradient(self) -> np.ndarray:
        """(12, 3, 3) constant gradients d(basis_i)_r / dx_s."""
        out = np.zeros((12, 3, 3))
        for a in range(4):
            for c in range(3):
                out[3 * a + c, c, :] = self.grad_lambda[a]
        return out

    def strain(self) -> np.ndarray:
        g = self.gradient()
        return 0.5 * (g + np.swapaxes(g, 1, 2))


def lagrange_p1_tri_vector(verts: np.ndarray) -> VectorP1Tri:
    return VectorP1Tri(verts)


def lagrange_p1_tet_vector_discontinuous(verts: np.ndarray) -> VectorP1Tet:
    return VectorP1Tet(verts)


def lagrange_p1_tet_vector_continuous(verts: np.ndarray) -> VectorP1Tet:
    return VectorP1Tet(verts)


# ---------------------------------------------------------------------------
# Morley element.
# ---------------------------------------------------------------------------

class MorleyElement:
    """Morley element on a physical triangle.

    Local DOFs (order): values at the three vertices, then normal derivatives
    at the three edge midpoints, edge e opposite vertex e running from local
    vertex e+1 to e+2 with outward (right-hand) unit normal.
    """

    n_dofs = 6

    def __init__(self, verts: np.ndarray):
        self.verts = np.asarray(verts, dtype=float)
        mids = np.array([
            0.5 * (self.verts[1] + self.verts[2]),
            0.5 * (self.verts[2] + self.verts[0]),
            0.5 * (self.verts[0] + self.verts[1]),
        ])
        normals = []
        for e in range(3):
            t = self.verts[(e + 2) % 3] - self.verts[(e + 1) % 3]
            nrm = np.array([t[1], -t[0]])
            normals.append(nrm / np.linalg.norm(nrm))
        self.edge_normals = np.asarray(normals)
        self.edge_midpoints = mids

        D = np.zeros((6, 6))
        D[:3, :] = _mono_val(self.verts)
        grads = _mono_grad(mids)  # (3, 6, 2)
        for e in range(3):
            D[3 + e, :] = grads[e] @ self.edge_normals[e]
        cond = np.linalg.cond(D)
        if cond > CONDITION_LIMIT:
            raise ValueError(
                f"Morley DOF matrix is ill-conditioned (cond = {cond:.3e}); "
                "degenerate triangle?"
            )
        self.coeffs = np.linalg.inv(D).T  # (basis, monomial)

    def value(self, points: np.ndarray) -> np.ndarray:
        """(np, 6) basis values at physical points."""
        return _mono_val(np.atleast_2d(points)) @ self.coeffs.T

    def gradient(self, points: np.ndarray) -> np.ndarray:
        """(np, 6, 2) basis gradients at physical points."""
        g = _mono_grad(np.atleast_2d(points))  # (np, 6, 2)
        return np.einsum("ik,pkd->pid", self.coeffs, g)

    def hessian(self) -> np.ndarray:
        """(6, 2, 2) constant basis Hessians."""
        H = np.zeros((6, 2, 2))
        for i in range(6):
            c = self.coeffs[i]
            H[i] = np.array([[2.0 * c[3], c[4]], [c[4], 2.0 * c[5]]])
        return H


def _mono_val(pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    return np.column_stack([np.ones_like(x), x, y, x * x, x * y, y * y])


def _mono_grad(pts: np.ndarray) -> np.ndarray:
    x, y = pts[:, 0], pts[:, 1]
    n = pts.shape[0]
    g = np.zeros((n, 6, 2))
    g[:, 1, 0] = 1.0
    g[:, 2, 1] = 1.0
    g[:, 3, 0] = 2.0 * x
    g[:, 4, 0] = y
    g[:, 4, 1] = x
    g[:, 5, 1] = 2.0 * y
    return g


def morley_tri(verts: np.ndarray) -> MorleyElement:
    return MorleyElement(verts)


def lower_morley_to_p1(plate_map: "PlateDofMap", w: np.ndarray) -> np.ndarray:
    """Vertex-value P1 coefficients of the continuous lowering of a Morley
    deflection field (identity on vertex values, edge DOFs dropped)."""
    nv = plate_map.mesh.n_vertices
    return np.asarray(w)[..., 2 * nv: 3 * nv]


# ---------------------------------------------------------------------------
# Stress element.
# ---------------------------------------------------------------------------

class HuMaElement:
    """Nonconforming H(div)-type symmetric stress element on a tetrahedron."""

    n_dofs = 42

    def __init__(self, verts: np.ndarray):
        self.verts = np.asarray(verts, dtype=float)
        self.grad_lambda, self.volume = _tet_grad_lambda(self.verts)
        if self.volume <= 0:
            raise ValueError("tet is degenerate or negatively oriented")
        tangents = []
        for (i, j) in EDGE_PAIRS:
            t = self.verts[j] - self.verts[i]
            tangents.append(t / np.linalg.norm(t))
        self.tangents = np.asarray(tangents)  # (6, 3)
        self.T = np.einsum("ea,eb->eab", self.tangents, self.tangents)  # (6,3,3)
        self._col_edge = np.repeat(np.arange(6), 7)  # spanning column -> edge

        self.face_normals = np.zeros((4, 3))
        self.face_areas = np.zeros(4)
        centroid = self.verts.mean(axis=0)
        for f in range(4):
            fv = self.verts[TET_LOCAL_FACES[f]]
            nrm = np.cross(fv[1] - fv[0], fv[2] - fv[0])
            area = 0.5 * np.linalg.norm(nrm)
            nrm = nrm / np.linalg.norm(nrm)
            if np.dot(nrm, fv.mean(axis=0) - centroid) < 0:
                nrm = -nrm
            self.face_normals[f] = nrm
            self.face_areas[f] = area

        D = self._dof_matrix()
        cond = np.linalg.cond(D)
        if cond > CONDITION_LIMIT:
            raise ValueError(
                f"stress DOF matrix is ill-conditioned (cond = {cond:.3e}); "
                "the spanning set degenerated on this tet"
            )
        self.coeffs = np.linalg.inv(D).T  # (basis, spanning)

    # -- spanning set ------------------------------------------------------

    def span_scalars(self, bary: np.ndarray) -> np.ndarray:
        """(nq, 42) scalar factors of the spanning functions."""
        bary = np.atleast_2d(bary)
        nq = bary.shape[0]
        out = np.empty((nq, 42))
        for e, (i, j) in enumerate(EDGE_PAIRS):
            l, m = _COMPLEMENT[e]
            base = 7 * e
            out[:, base: base + 4] = bary
            diff = bary[:, i] - bary[:, j]
            out[:, base + 4] = diff * bary[:, l]
            out[:, base + 5] = diff * bary[:, m]
            out[:, base + 6] = bary[:, i] * bary[:, j]
        return out

    def _span_dlam(self, bary: np.ndarray) -> np.ndarray:
        """(nq, 42, 4) derivatives of the scalar factors w.r.t. barycentric
        coordinates."""
        bary = np.atleast_2d(bary)
        nq = bary.shape[0]
        out = np.zeros((nq, 42, 4))
        for e, (i, j) in enumerate(EDGE_PAIRS):
            l, m = _COMPLEMENT[e]
            base = 7 * e
            for a in range(4):
                out[:, base + a, a] = 1.0
            diff = bary[:, i] - bary[:, j]
            out[:, base + 4, i] = bary[:, l]
            out[:, base + 4, j] = -bary[:, l]
            out[:, base + 4, l] = diff
            out[:, base + 5, i] = bary[:, m]
            out[:, base + 5, j] = -bary[:, m]
            out[:, base + 5, m] = diff
            out[:, base + 6, i] = bary[:, j]
            out[:, base + 6, j] = bary[:, i]
        return out

    def span_values(self, bary: np.ndarray) -> np.ndarray:
        """(nq, 42, 3, 3) spanning-function values."""
        s = self.span_scalars(bary)
        return s[:, :, None, None] * self.T[self._col_edge][None, :, :, :]

    def span_divergence(self, bary: np.ndarray) -> np.ndarray:
        """(nq, 42, 3) divergences of the spanning functions."""
        dlam = self._span_dlam(bary)
        grads = np.einsum("qkl,ld->qkd", dlam, self.grad_lambda)
        return np.einsum("kab,qkb->qka", self.T[self._col_edge], grads)

    # -- dual basis --------------------------------------------------------

    def _embed_face_bary(self, f: int, face_bary: np.ndarray) -> np.ndarray:
        nq = face_bary.shape[0]
        bary = np.zeros((nq, 4))
        bary[:, TET_LOCAL_FACES[f]] = face_bary
        return bary

    def _dof_matrix(self) -> np.ndarray:
        D = np.zeros((42, 42))
        fb = _FACE_RULE.points
        fw = _FACE_RULE.weights  # sum 1/2
        for f in range(4):
            bary = self._embed_face_bary(f, fb)
            tr = np.einsum("qkab,b->qka", self.span_values(bary),
                           self.face_normals[f])
            # moment[a, c, k] = (1/|F|) int_F (span_k n) . (lam_a e_c)
            mom = 2.0 * np.einsum("q,qa,qkc->ack", fw, fb, tr)
            for a in range(3):
                for c in range(3):
                    D[9 * f + 3 * a + c, :] = mom[a, c, :]
        tb = _INTERIOR_RULE.points
        tw = _INTERIOR_RULE.weights  # sum 1/6
        vals = self.span_values(tb)
        for m, (i, j) in enumerate(SYM_INDEX_PAIRS):
            D[36 + m, :] = 6.0 * np.einsum("q,qk->k", tw, vals[:, :, i, j])
        return D

    # -- dual-basis evaluation --------------------------------------------

    def values(self, bary: np.ndarray) -> np.ndarray:
        """(nq, 42, 3, 3) basis values at barycentric points."""
        return np.einsum("ik,qkab->qiab", self.coeffs, self.span_values(bary))

    def divergence(self, bary: np.ndarray) -> np.ndarray:
        """(nq, 42, 3) basis divergences at barycentric points."""
        return np.einsum("ik,qkb->qib", self.coeffs, self.span_divergence(bary))

    def traction(self, f: int, face_bary: np.ndarray) -> np.ndarray:
        """(nq, 42, 3) tractions (basis . outward normal) on local face f at
        face-barycentric points."""
        bary = self._embed_face_bary(f, np.atleast_2d(face_bary))
        return np.einsum("qiab,b->qia", self.values(bary), self.face_normals[f])

    def bary_of(self, points: np.ndarray) -> np.ndarray:
        """Barycentric coordinates wrt THIS element's vertices.  When the
        element instance is shared between congruent (translated) tets, use
        ``tet_barycentric`` with the actual tet's vertices instead."""
        return tet_barycentric(self.verts, points)


def huma_stress_tet(verts: np.ndarray) -> HuMaElement:
    return HuMaElement(verts)


def evaluate_stress_trace(
    element: HuMaElement, local_face: int, face_bary: np.ndarray
) -> np.ndarray:
    """Traction basis values on a local face; see HuMaElement.traction."""
    return element.traction(local_face, face_bary)


# ---------------------------------------------------------------------------
# Element caches (congruence classes: structured meshes repeat a handful of
# translated element shapes).
# ---------------------------------------------------------------------------

class _CongruenceCache:
    def __init__(self, factory):
        self.factory = factory
        self._store: dict[tuple, object] = {}

    def get(self, verts: np.ndarray):
        rel = verts - verts[0]
        key = tuple(np.round(rel.ravel(), 12))
        obj = self._store.get(key)
        if obj is None:
            obj = self.factory(verts)
            self._store[key] = obj
        return obj


def huma_cache() -> _CongruenceCache:
    return _CongruenceCache(HuMaElement)


def morley_cache() -> _CongruenceCache:
    return _CongruenceCache(MorleyElement)


# ---------------------------------------------------------------------------
# DOF maps.
# ---------------------------------------------------------------------------

@dataclass
class _FaceRecord:
    vertices: tuple[int, int, int]  # sorted global ids
    owner: int
    owner_local: int
    neighbor: int  # -1 on the boundary
    tag: int  # -1 interior, else FaceTag


class StressDofMap:
    """Global numbering of the stress space: nine DOFs per mesh face (ordered
    by the face's sorted global vertex ids and Cartesian component, with the
    owner tet's outward normal defining the sign) plus six interior DOFs per
    tet.  Non-owner tets see their shared-face DOFs with a -1 sign."""

    def __init__(self, mesh: TetMesh):
        self.mesh = mesh
        nt = mesh.n_tets

        face_index: dict[tuple, int] = {}
        records: list[_FaceRecord] = []
        for t in range(nt):
            for f in range(4):
                key = tuple(sorted(int(v) for v in mesh.tets[t, TET_LOCAL_FACES[f]]))
                fid = face_index.get(key)
                if fid is None:
                    face_index[key] = len(records)
                    records.append(_FaceRecord(key, t, f, -1, -1))
                else:
                    records[fid].neighbor = t
        boundary_tag = {
            tuple(sorted(int(v) for v in tri)): int(tag)
            for tri, tag in zip(mesh.boundary_faces, mesh.boundary_tags)
        }
        for rec in records:
            if rec.neighbor == -1:
                rec.tag = boundary_tag[rec.vertices]
        self.faces = records
        self.face_index = face_index
        self.n_faces = len(records)
        self.n_face_dofs = 9 * self.n_faces
        self.n_dofs = self.n_face_dofs + 6 * nt

        ltg = np.zeros((nt, 42), dtype=np.int64)
        sign = np.ones((nt, 42))
        for t in range(nt):
            for f in range(4):
                lv = mesh.tets[t, TET_LOCAL_FACES[f]]
                key = tuple(sorted(int(v) for v in lv))
                fid = face_index[key]
                ranks = np.argsort(np.argsort(lv))
                s = 1.0 if records[fid].owner == t else -1.0
                for a in range(3):
                    for c in range(3):
                        ltg[t, 9 * f + 3 * a + c] = 9 * fid + 3 * ranks[a] + c
                        sign[t, 9 * f + 3 * a + c] = s
            base = self.n_face_dofs + 6 * t
            ltg[t, 36:42] = np.arange(base, base + 6)
        self.ltg = ltg
        self.sign = sign

        # Essential (traction boundary) DOFs: the nine DOFs of each FREE face.
        free_faces = [
            i for i, rec in enumerate(records) if rec.tag == int(FaceTag.FREE)
        ]
        self.free_face_ids = np.asarray(free_faces, dtype=np.int64)
        ess = []
        for fid in free_faces:
            ess.extend(range(9 * fid, 9 * fid + 9))
        self.essential_dofs = np.asarray(ess, dtype=np.int64)
        self.interface_face_ids = np.asarray(
            [i for i, rec in enumerate(records) if rec.tag == int(FaceTag.INTERFACE)],
            dtype=np.int64,
        )

    def local_coefficients(self, t: int, sigma: np.ndarray) -> np.ndarray:
        """Local 42-vector of element coefficients from a global vector."""
        return self.sign[t] * sigma[self.ltg[t]]


class BodyDGDofMap:
    """Discontinuous vector P1 on tets: DOF 12 t + 3 a + c."""

    def __init__(self, mesh: TetMesh):
        self.mesh = mesh
        self.n_dofs = 12 * mesh.n_tets
        base = 12 * np.arange(mesh.n_tets, dtype=np.int64)[:, None]
        self.ltg = base + np.arange(12, dtype=np.int64)[None, :]


class BodyCGDofMap:
    """Continuous vector P1 on tets: DOF 3 v + c."""

    def __init__(self, mesh: TetMesh):
        self.mesh = mesh
        self.n_dofs = 3 * mesh.n_vertices
        self.ltg = np.zeros((mesh.n_tets, 12), dtype=np.int64)
        for a in range(4):
            for c in range(3):
                self.ltg[:, 3 * a + c] = 3 * mesh.tets[:, a] + c
        boundary_verts = set()
        for tri, tag in zip(mesh.boundary_faces, mesh.boundary_tags):
            if tag == FaceTag.INTERFACE:
                boundary_verts.update(int(v) for v in tri)
        self.interface_vertices = np.asarray(sorted(boundary_verts), dtype=np.int64)


class PlateDofMap:
    """Plate DOFs: membrane values (2 per vertex), Morley vertex values, and
    Morley edge-midpoint normal derivatives.

    Layout: membrane (a, c) -> 2 v + c on [0, 2 nv); Morley vertex v ->
    2 nv + v; Morley edge e -> 3 nv + e.  Clamped boundary DOFs (all membrane
    and Morley DOFs on boundary vertices/edges) are flagged in ``constrained``.
    """

    def __init__(self, mesh: TriMesh):
        self.mesh = mesh
        nv = mesh.n_vertices
        ntri = mesh.n_triangles

        edge_index: dict[tuple, int] = {}
        edge_list: list[tuple] = []
        for t in range(ntri):
            tri = mesh.triangles[t]
            for e in range(3):
                key = tuple(sorted((int(tri[(e + 1) % 3]), int(tri[(e + 2) % 3]))))
                if key not in edge_index:
                    edge_index[key] = len(edge_list)
                    edge_list.append(key)
        self.edges = np.asarray(edge_list, dtype=np.int64)
        self.n_edges = len(edge_list)
        self.n_dofs = 3 * nv + self.n_edges
        self.membrane_offset = 0
        self.morley_vertex_offset = 2 * nv
        self.morley_edge_offset = 3 * nv

        self.mem_ltg = np.zeros((ntri, 6), dtype=np.int64)
        self.mor_ltg = np.zeros((ntri, 6), dtype=np.int64)
        self.mor_sign = np.ones((ntri, 6))
        for t in range(ntri):
            tri = mesh.triangles[t]
            for a in range(3):
                for c in range(2):
                    self.mem_ltg[t, 2 * a + c] = 2 * int(tri[a]) + c
                self.mor_ltg[t, a] = 2 * nv + int(tri[a])
            for e in range(3):
                va, vb = int(tri[(e + 1) % 3]), int(tri[(e + 2) % 3])
                key = tuple(sorted((va, vb)))
                self.mor_ltg[t, 3 + e] = 3 * nv + edge_index[key]
                self.mor_sign[t, 3 + e] = 1.0 if va < vb else -1.0

        boundary_verts = set(int(v) for v in mesh.boundary_edges.ravel())
        constrained = np.zeros(self.n_dofs, dtype=bool)
        for v in boundary_verts:
            constrained[2 * v] = True
            constrained[2 * v + 1] = True
            constrained[2 * nv + v] = True
        for ed in mesh.boundary_edges:
            key = tuple(sorted((int(ed[0]), int(ed[1]))))
            constrained[3 * nv + edge_index[key]] = True
        self.constrained = constrained
        self.boundary_vertices = np.asarray(sorted(boundary_verts), dtype=np.int64)
        self.edge_index = edge_index

    def membrane_slice(self) -> slice:
        return slice(0, 2 * self.mesh.n_vertices)

    def morley_slice(self) -> slice:
        return slice(2 * self.mesh.n_vertices, self.n_dofs)

    def local_morley_coefficients(self, t: int, w: np.ndarray) -> np.ndarray:
        return self.mor_sign[t] * w[self.mor_ltg[t]]
