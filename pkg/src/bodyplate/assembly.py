"""Global assembly of the mixed and displacement formulations.

Mixed monolithic system (sigma, u, w) with homogeneous test constraints:

    [ A   B^T  -G^T ] [sigma]   [ 0   ]
    [ B   0     0   ] [  u  ] = [ f_V ]
    [-G   0    -K   ] [  w  ]   [-f_W ]

with A the compliance form (C0^-1 sigma, tau), B the divergence pairing
(div tau, v), G the interface coupling (tau n, Pi v)_Gamma against the lowered
plate test functions, K = K_mem + K_bend the plate stiffness, f_V = -(f, psi),
and f_W the plate load (smooth part against the actual plate basis, interface
jump part against the lowered basis).  Traction data enters through essential
stress DOFs on free faces; the clamped plate boundary through zero plate DOFs.

The displacement baseline shares vertex DOFs between the continuous body P1
space and the plate along the interface (components 1-2 with the membrane,
component 3 with Morley vertex values) and is symmetric positive definite.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .geometry_mesh import TET_LOCAL_FACES, FaceTag, TetMesh, TriMesh
from .interface_overlay import (
    InterfaceFace,
    OverlayCell,
    triangle_barycentric,
)
from .manufactured import ManufacturedCase
from .materials import MaterialParams, c0_apply, c0_inv_apply, c1_apply, c2_apply
from .fe_elements import (
    BodyCGDofMap,
    BodyDGDofMap,
    HuMaElement,
    MorleyElement,
    PlateDofMap,
    StressDofMap,
    VectorP1Tri,
    VectorP1Tet,
    tet_barycentric,
)
from .quadrature import physical_weights, tet_rule, triangle_rule

__all__ = [
    "assemble_compliance",
    "assemble_stress_mass",
    "assemble_div_div",
    "assemble_divergence",
    "assemble_body_mass",
    "assemble_plate_stiffness",
    "assemble_interface_coupling",
    "assemble_interface_coupling_direct",
    "impose_traction_bc",
    "assemble_loads",
    "project_to_Vh",
    "BlockSystem",
    "build_mixed_system",
    "DisplacementSystem",
    "assemble_displacement_system",
    "Constraints",
]


def _congruence_key(verts: np.ndarray) -> tuple:
    rel = verts - verts[0]
    return tuple(np.round(rel.ravel(), 12))


class _COO:
    """Triplet accumulator."""

    def __init__(self):
        self.rows: list[np.ndarray] = []
        self.cols: list[np.ndarray] = []
        self.vals: list[np.ndarray] = []

    def add_block(self, rows: np.ndarray, cols: np.ndarray, block: np.ndarray):
        r, c = np.meshgrid(rows, cols, indexing="ij")
        self.rows.append(r.ravel())
        self.cols.append(c.ravel())
        self.vals.append(np.asarray(block).ravel())

    def build(self, shape) -> sp.csr_matrix:
        if not self.rows:
            return sp.csr_matrix(shape)
        m = sp.coo_matrix(
            (
                np.concatenate(self.vals),
                (np.concatenate(self.rows), np.concatenate(self.cols)),
            ),
            shape=shape,
        )
        return m.tocsr()


def _stress_elements(body: TetMesh) -> list[HuMaElement]:
    """One stress element per tet, cached by congruence class."""
    cache: dict[tuple, HuMaElement] = {}
    out = []
    for t in range(body.n_tets):
        verts = body.tet_vertices(t)
        key = _congruence_key(verts)
        el = cache.get(key)
        if el is None:
            el = HuMaElement(verts)
            cache[key] = el
        out.append(el)
    return out


# ---------------------------------------------------------------------------
# Body bilinear forms.
# ---------------------------------------------------------------------------

def _assemble_stress_form(body, smap, local_fn) -> sp.csr_matrix:
    """Generic (42 x 42)-per-tet stress form with congruence caching."""
    acc = _COO()
    cache: dict[tuple, tuple[HuMaElement, np.ndarray]] = {}
    for t in range(body.n_tets):
        verts = body.tet_vertices(t)
        key = _congruence_key(verts)
        hit = cache.get(key)
        if hit is None:
            el = HuMaElement(verts)
            hit = (el, local_fn(el))
            cache[key] = hit
        _, loc = hit
        s = smap.sign[t]
        acc.add_block(smap.ltg[t], smap.ltg[t], loc * np.outer(s, s))
    return acc.build((smap.n_dofs, smap.n_dofs))


def assemble_compliance(
    body: TetMesh,
    smap: StressDofMap,
    params: MaterialParams,
    quad_degree: int = 4,
) -> sp.csr_matrix:
    """A[i, j] = int_alpha (C0^-1 phi_j) : phi_i  (symmetric positive definite)."""
    rule = tet_rule(quad_degree)

    def local(el: HuMaElement) -> np.ndarray:
        w = physical_weights(rule, el.volume)
        vals = el.values(rule.points)
        compl = c0_inv_apply(vals, params)
        return np.einsum("q,qiab,qjab->ij", w, compl, vals)

    return _assemble_stress_form(body, smap, local)


def assemble_stress_mass(
    body: TetMesh, smap: StressDofMap, quad_degree: int = 4
) -> sp.csr_matrix:
    """Plain L2 mass of the stress space, int phi_i : phi_j."""
    rule = tet_rule(quad_degree)

    def local(el: HuMaElement) -> np.ndarray:
        w = physical_weights(rule, el.volume)
        vals = el.values(rule.points)
        return np.einsum("q,qiab,qjab->ij", w, vals, vals)

    return _assemble_stress_form(body, smap, local)


def assemble_div_div(
    body: TetMesh, smap: StressDofMap, quad_degree: int = 4
) -> sp.csr_matrix:
    """int div phi_i . div phi_j (elementwise divergence)."""
    rule = tet_rule(quad_degree)

    def local(el: HuMaElement) -> np.ndarray:
        w = physical_weights(rule, el.volume)
        div = el.divergence(rule.points)
        return np.einsum("q,qia,qja->ij", w, div, div)

    return _assemble_stress_form(body, smap, local)


def assemble_divergence(
    body: TetMesh,
    smap: StressDofMap,
    vmap,
    quad_degree: int = 4,
) -> sp.csr_matrix:
    """B[k, i] = int_alpha div(phi_i) . psi_k  (V x Sigma)."""
    rule = tet_rule(quad_degree)
    acc = _COO()
    cache: dict[tuple, np.ndarray] = {}
    for t in range(body.n_tets):
        verts = body.tet_vertices(t)
        key = _congruence_key(verts)
        loc = cache.get(key)
        if loc is None:
            el = HuMaElement(verts)
            w = physical_weights(rule, el.volume)
            div = el.divergence(rule.points)  # (nq, 42, 3)
            loc = np.einsum("q,qa,qic->aci", w, rule.points, div).reshape(12, 42)
            cache[key] = loc
        acc.add_block(vmap.ltg[t], smap.ltg[t], loc * smap.sign[t][None, :])
    return acc.build((vmap.n_dofs, smap.n_dofs))


def assemble_body_mass(body: TetMesh, vmap, quad_degree: int = 4) -> sp.csr_matrix:
    """Vector P1 mass matrix on the body (works for the DG and CG maps)."""
    rule = tet_rule(quad_degree)
    acc = _COO()
    cache: dict[tuple, np.ndarray] = {}
    for t in range(body.n_tets):
        verts = body.tet_vertices(t)
        key = _congruence_key(verts)
        loc = cache.get(key)
        if loc is None:
            el = VectorP1Tet(verts)
            w = physical_weights(rule, el.volume)
            vals = el.value(rule.points)
            loc = np.einsum("q,qia,qja->ij", w, vals, vals)
            cache[key] = loc
        acc.add_block(vmap.ltg[t], vmap.ltg[t], loc)
    return acc.build((vmap.n_dofs, vmap.n_dofs))


# ---------------------------------------------------------------------------
# Plate stiffness.
# ---------------------------------------------------------------------------

def assemble_plate_stiffness(
    plate: TriMesh,
    pmap: PlateDofMap,
    params: MaterialParams,
    region: str = "all",
) -> sp.csr_matrix:
    """Membrane + bending stiffness over the full plate DOF set.

    ``region='all'`` integrates over every triangle; ``region='omit_interface'``
    only over triangles outside closure(Gamma) (used by the domain-
    decomposition extension energy).
    """
    if region == "all":
        tri_ids = range(plate.n_triangles)
    elif region == "omit_interface":
        inside = set(int(t) for t in plate.interface_region_triangles)
        tri_ids = [t for t in range(plate.n_triangles) if t not in inside]
    else:
        raise ValueError(f"unknown region {region!r}")

    acc = _COO()
    for t in tri_ids:
        verts = plate.triangle_vertices(t)
        mem = VectorP1Tri(verts)
        strain = mem.strain()
        sig = c1_apply(strain, params)
        k_mem = mem.area * np.einsum("iab,jab->ij", sig, strain)
        acc.add_block(pmap.mem_ltg[t], pmap.mem_ltg[t], k_mem)

        mo = MorleyElement(verts)
        hess = mo.hessian()
        mom = c2_apply(hess, params)
        k_bend = mem.area * np.einsum("iab,jab->ij", mom, hess)
        s = pmap.mor_sign[t]
        acc.add_block(pmap.mor_ltg[t], pmap.mor_ltg[t], k_bend * np.outer(s, s))
    return acc.build((pmap.n_dofs, pmap.n_dofs))


# ---------------------------------------------------------------------------
# Interface coupling.
# ---------------------------------------------------------------------------

def _face_local_index(smap: StressDofMap, face: InterfaceFace) -> int:
    key = tuple(sorted(int(v) for v in face.vertex_ids))
    fid = smap.face_index[key]
    rec = smap.faces[fid]
    if rec.owner != face.owner_tet:
        raise ValueError("interface face owner mismatch between mesh and overlay")
    return rec.owner_local


def assemble_interface_coupling(
    body: TetMesh,
    smap: StressDofMap,
    plate: TriMesh,
    pmap: PlateDofMap,
    faces: list[InterfaceFace],
    cells: list[OverlayCell],
) -> sp.csr_matrix:
    """G[w, s] = int_Gamma (phi_s n) . (Pi chi_w), assembled on the overlay.

    Pi is the trace lowering: membrane test functions unchanged, Morley test
    functions replaced by the continuous P1 field of their vertex values
    (Morley edge DOFs yield identically zero rows).
    """
    elements: dict[int, HuMaElement] = {}
    cache: dict[tuple, HuMaElement] = {}
    face_local = {f.face_id: _face_local_index(smap, f) for f in faces}

    acc = _COO()
    for cell in cells:
        face = faces[cell.face_id]
        t = face.owner_tet
        el = elements.get(t)
        if el is None:
            verts = body.tet_vertices(t)
            key = _congruence_key(verts)
            el = cache.get(key)
            if el is None:
                el = HuMaElement(verts)
                cache[key] = el
            elements[t] = el
        pts3 = np.column_stack([cell.points, np.zeros(cell.points.shape[0])])
        # Barycentric coords from the tet's own vertices: the cached element
        # may come from a congruent (translated) tet, so only translation-
        # invariant quantities of it may be used.
        bary = tet_barycentric(body.tet_vertices(t), pts3)
        nrm = el.face_normals[face_local[face.face_id]]
        tr = np.einsum("qiab,b->qia", el.values(bary), nrm)  # (nq, 42, 3)
        tr = tr * smap.sign[t][None, :, None]
        cols = smap.ltg[t]

        hat = triangle_barycentric(plate.triangle_vertices(cell.tri_id), cell.points)
        w = cell.weights
        mem_blk = np.einsum("q,qa,qic->aci", w, hat, tr[:, :, :2]).reshape(6, 42)
        acc.add_block(pmap.mem_ltg[cell.tri_id], cols, mem_blk)
        mor_blk = np.einsum("q,qa,qi->ai", w, hat, tr[:, :, 2])
        acc.add_block(pmap.mor_ltg[cell.tri_id][:3], cols, mor_blk)
    return acc.build((pmap.n_dofs, smap.n_dofs))


def assemble_interface_coupling_direct(
    body: TetMesh,
    smap: StressDofMap,
    plate: TriMesh,
    pmap: PlateDofMap,
    faces: list[InterfaceFace],
    quad_degree: int = 6,
) -> sp.csr_matrix:
    """Matching-mesh coupling integrated face by face on the single shared
    triangulation (no overlay); used to cross-check the overlay path."""
    lookup: dict[tuple, int] = {}
    for t in plate.interface_region_triangles:
        t = int(t)
        key = tuple(sorted(map(tuple, np.round(plate.triangle_vertices(t), 9))))
        lookup[key] = t
    rule = triangle_rule(quad_degree)
    cache: dict[tuple, HuMaElement] = {}

    acc = _COO()
    for face in faces:
        key = tuple(sorted(map(tuple, np.round(face.verts2d, 9))))
        tri = lookup.get(key)
        if tri is None:
            raise ValueError(
                "meshes do not match on the interface; use the overlay coupling"
            )
        t = face.owner_tet
        verts = body.tet_vertices(t)
        ckey = _congruence_key(verts)
        el = cache.get(ckey)
        if el is None:
            el = HuMaElement(verts)
            cache[ckey] = el
        pts2 = rule.points @ face.verts2d
        area = face.area
        w = physical_weights(rule, area)
        pts3 = np.column_stack([pts2, np.zeros(pts2.shape[0])])
        bary = tet_barycentric(verts, pts3)
        nrm = el.face_normals[_face_local_index(smap, face)]
        tr = np.einsum("qiab,b->qia", el.values(bary), nrm)
        tr = tr * smap.sign[t][None, :, None]
        cols = smap.ltg[t]
        hat = triangle_barycentric(plate.triangle_vertices(tri), pts2)
        mem_blk = np.einsum("q,qa,qic->aci", w, hat, tr[:, :, :2]).reshape(6, 42)
        acc.add_block(pmap.mem_ltg[tri], cols, mem_blk)
        mor_blk = np.einsum("q,qa,qi->ai", w, hat, tr[:, :, 2])
        acc.add_block(pmap.mor_ltg[tri][:3], cols, mor_blk)
    return acc.build((pmap.n_dofs, smap.n_dofs))


# ---------------------------------------------------------------------------
# Data terms.
# ---------------------------------------------------------------------------

def impose_traction_bc(
    body: TetMesh,
    smap: StressDofMap,
    traction_fn,
    quad_degree: int = 6,
) -> tuple[np.ndarray, np.ndarray]:
    """Essential values of the free-face stress DOFs.

    ``traction_fn(points, normal)`` returns the traction g = sigma n at
    physical points for the face's outward unit normal.  Returns the DOF
    indices and their values: value[(p, c)] = (1/|F|) int_F (g . e_c) lam_p
    with lam_p the face's P1 basis in sorted-global-vertex order.
    """
    rule = triangle_rule(quad_degree)
    idx = smap.essential_dofs
    values = np.zeros(idx.shape[0])
    pos = 0
    for fid in smap.free_face_ids:
        rec = smap.faces[fid]
        vids = rec.vertices  # sorted
        coords = body.vertices[list(vids)]
        pts = rule.points @ coords
        el_verts = body.tet_vertices(rec.owner)
        nrm = _outward_normal(el_verts, rec.owner_local)
        g = traction_fn(pts, nrm)  # (nq, 3)
        mom = 2.0 * np.einsum("q,qp,qc->pc", rule.weights, rule.points, g)
        values[pos: pos + 9] = mom.reshape(9)
        pos += 9
    return idx, values


def _outward_normal(tet_verts: np.ndarray, local_face: int) -> np.ndarray:
    fv = tet_verts[TET_LOCAL_FACES[local_face]]
    nrm = np.cross(fv[1] - fv[0], fv[2] - fv[0])
    nrm = nrm / np.linalg.norm(nrm)
    centroid = tet_verts.mean(axis=0)
    if np.dot(nrm, fv.mean(axis=0) - centroid) < 0:
        nrm = -nrm
    return nrm


def assemble_loads(
    body: TetMesh,
    vmap,
    plate: TriMesh,
    pmap: PlateDofMap,
    case: ManufacturedCase,
    quad_volume: int = 4,
    quad_interface: int = 6,
    lowered_jump: bool = True,
) -> tuple[np.ndarray, np.ndarray]:
    """Load vectors of the mixed system.

    f_V[k] = -int_alpha f . psi_k;
    f_W[w] = int_beta (f_membrane, f_bending) . chi_w
             + int_Gamma f_jump . (Pi chi_w  if lowered_jump else chi_w).
    """
    f_V = np.zeros(vmap.n_dofs)
    rule = tet_rule(quad_volume)
    for t in range(body.n_tets):
        verts = body.tet_vertices(t)
        el = VectorP1Tet(verts)
        w = physical_weights(rule, el.volume)
        pts = rule.points @ verts
        fv = case.f_body(pts)  # (nq, 3)
        loc = -np.einsum("q,qa,qc->ac", w, rule.points, fv).reshape(12)
        np.add.at(f_V, vmap.ltg[t], loc)

    f_W = np.zeros(pmap.n_dofs)
    tri_rule = triangle_rule(quad_volume)
    for t in range(plate.n_triangles):
        verts = plate.triangle_vertices(t)
        mem = VectorP1Tri(verts)
        w = physical_weights(tri_rule, mem.area)
        pts = tri_rule.points @ verts
        fm = case.f_membrane(pts)
        loc = np.einsum("q,qa,qc->ac", w, tri_rule.points, fm).reshape(6)
        np.add.at(f_W, pmap.mem_ltg[t], loc)
        mo = MorleyElement(verts)
        fb = case.f_bending(pts)
        locb = np.einsum("q,qi,q->i", w, mo.value(pts), fb)
        np.add.at(f_W, pmap.mor_ltg[t], pmap.mor_sign[t] * locb)

    jrule = triangle_rule(quad_interface)
    for t in plate.interface_region_triangles:
        t = int(t)
        verts = plate.triangle_vertices(t)
        area = VectorP1Tri(verts).area
        w = physical_weights(jrule, area)
        pts = jrule.points @ verts
        fj = case.f_jump(pts)  # (nq, 3)
        loc = np.einsum("q,qa,qc->ac", w, jrule.points, fj[:, :2]).reshape(6)
        np.add.at(f_W, pmap.mem_ltg[t], loc)
        if lowered_jump:
            locm = np.einsum("q,qa,q->a", w, jrule.points, fj[:, 2])
            np.add.at(f_W, pmap.mor_ltg[t][:3], locm)
        else:
            mo = MorleyElement(verts)
            locm = np.einsum("q,qi,q->i", w, mo.value(pts), fj[:, 2])
            np.add.at(f_W, pmap.mor_ltg[t], pmap.mor_sign[t] * locm)
    return f_V, f_W


def project_to_Vh(body: TetMesh, vmap, func, quad_degree: int = 4) -> np.ndarray:
    """Elementwise L2 projection of a vector field onto the discontinuous
    vector P1 space (12 x 12 local mass solves)."""
    rule = tet_rule(quad_degree)
    out = np.zeros(vmap.n_dofs)
    mass_cache: dict[tuple, np.ndarray] = {}
    for t in range(body.n_tets):
        verts = body.tet_vertices(t)
        el = VectorP1Tet(verts)
        key = _congruence_key(verts)
        M = mass_cache.get(key)
        w = physical_weights(rule, el.volume)
        vals = el.value(rule.points)
        if M is None:
            M = np.einsum("q,qia,qja->ij", w, vals, vals)
            mass_cache[key] = M
        pts = rule.points @ verts
        f = np.atleast_2d(func(pts))
        rhs = np.einsum("q,qia,qa->i", w, vals, f)
        out[vmap.ltg[t]] = np.linalg.solve(M, rhs)
    return out


# ---------------------------------------------------------------------------
# Constraint condensation.
# ---------------------------------------------------------------------------

@dataclass
class Constraints:
    """Essential constraints x[idx] = values on a square system."""

    n: int
    idx: np.ndarray
    values: np.ndarray
    free: np.ndarray = field(init=False)

    def __post_init__(self):
        mask = np.ones(self.n, dtype=bool)
        mask[self.idx] = False
        self.free = np.flatnonzero(mask)

    def reduce(self, M: sp.spmatrix, rhs: np.ndarray):
        """Symmetric condensation: returns (M_ff, rhs_f)."""
        M = M.tocsr()
        M_ff = M[self.free][:, self.free]
        rhs_f = rhs[self.free]
        if self.idx.size:
            M_fc = M[self.free][:, self.idx]
            rhs_f = rhs_f - M_fc @ self.values
        return M_ff.tocsc(), rhs_f

    def expand(self, x_f: np.ndarray) -> np.ndarray:
        x = np.zeros(self.n)
        x[self.free] = x_f
        if self.idx.size:
            x[self.idx] = self.values
        return x


# ---------------------------------------------------------------------------
# System builders.
# ---------------------------------------------------------------------------

@dataclass
class BlockSystem:
    """Assembled blocks of the mixed formulation plus constraint data."""

    body: TetMesh
    plate: TriMesh
    smap: StressDofMap
    vmap: BodyDGDofMap
    pmap: PlateDofMap
    params: MaterialParams
    A: sp.csr_matrix
    B: sp.csr_matrix
    G: sp.csr_matrix
    K: sp.csr_matrix
    f_V: np.ndarray
    f_W: np.ndarray
    sigma_essential_idx: np.ndarray
    sigma_essential_values: np.ndarray

    @property
    def n_sigma(self) -> int:
        return self.smap.n_dofs

    @property
    def n_v(self) -> int:
        return self.vmap.n_dofs

    @property
    def n_w(self) -> int:
        return self.pmap.n_dofs

    def monolithic(self) -> tuple[sp.csr_matrix, np.ndarray, Constraints]:
        """Symmetric indefinite monolithic matrix, right-hand side, and the
        combined constraint set (stress essential + clamped plate)."""
        ns, nv, nw = self.n_sigma, self.n_v, self.n_w
        n = ns + nv + nw
        M = sp.bmat(
            [
                [self.A, self.B.T, -self.G.T],
                [self.B, None, None],
                [-self.G, None, -self.K],
            ],
            format="csr",
        )
        rhs = np.concatenate([np.zeros(ns), self.f_V, -self.f_W])
        clamped = np.flatnonzero(self.pmap.constrained) + ns + nv
        idx = np.concatenate([self.sigma_essential_idx, clamped])
        vals = np.concatenate(
            [self.sigma_essential_values, np.zeros(clamped.shape[0])]
        )
        return M, rhs, Constraints(n, idx, vals)

    def split(self, x: np.ndarray):
        ns, nv = self.n_sigma, self.n_v
        return x[:ns], x[ns: ns + nv], x[ns + nv:]


def build_mixed_system(
    body: TetMesh,
    plate: TriMesh,
    case: ManufacturedCase,
    params: MaterialParams | None = None,
    quad_volume: int = 4,
    quad_interface: int = 6,
    faces: list[InterfaceFace] | None = None,
    cells: list[OverlayCell] | None = None,
) -> BlockSystem:
    """Assemble all blocks of the mixed formulation for a manufactured case."""
    from .interface_overlay import (
        extract_interface_triangulation,
        intersect_triangulations,
    )

    if params is None:
        params = case.params
    smap = StressDofMap(body)
    vmap = BodyDGDofMap(body)
    pmap = PlateDofMap(plate)

    if faces is None:
        faces = extract_interface_triangulation(body)
    if cells is None:
        cells = intersect_triangulations(faces, plate, quad_degree=quad_interface)

    A = assemble_compliance(body, smap, params, quad_volume)
    B = assemble_divergence(body, smap, vmap, quad_volume)
    G = assemble_interface_coupling(body, smap, plate, pmap, faces, cells)
    K = assemble_plate_stiffness(plate, pmap, params, region="all")
    f_V, f_W = assemble_loads(
        body, vmap, plate, pmap, case,
        quad_volume=quad_volume, quad_interface=quad_interface, lowered_jump=True,
    )
    ess_idx, ess_vals = impose_traction_bc(
        body, smap, case.traction, quad_degree=quad_interface
    )
    return BlockSystem(
        body=body, plate=plate, smap=smap, vmap=vmap, pmap=pmap, params=params,
        A=A, B=B, G=G, K=K, f_V=f_V, f_W=f_W,
        sigma_essential_idx=ess_idx, sigma_essential_values=ess_vals,
    )


# ---------------------------------------------------------------------------
# Displacement baseline.
# ---------------------------------------------------------------------------

@dataclass
class DisplacementSystem:
    """Coupled continuous-displacement system (SPD after condensation)."""

    body: TetMesh
    plate: TriMesh
    cmap: BodyCGDofMap
    pmap: PlateDofMap
    params: MaterialParams
    K: sp.csr_matrix
    rhs: np.ndarray
    constraints: Constraints
    body_to_unified: np.ndarray  # (3 nv_body,)
    plate_offset: int

    def split(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Unified solution -> (body CG coefficients, plate coefficients)."""
        u_body = x[self.body_to_unified]
        w = x[self.plate_offset:]
        return u_body, w


def assemble_displacement_system(
    body: TetMesh,
    plate: TriMesh,
    case: ManufacturedCase,
    params: MaterialParams | None = None,
    quad_volume: int = 4,
    quad_interface: int = 6,
) -> DisplacementSystem:
    """Continuous vector P1 body + (membrane P1, Morley) plate, joined by
    identifying interface vertex DOFs (components 1-2 with membrane values,
    component 3 with Morley vertex values).  Requires meshes matching on the
    interface: plate n = 2 body n with the body's diagonal convention."""
    if params is None:
        params = case.params
    cmap = BodyCGDofMap(body)
    pmap = PlateDofMap(plate)

    # Vertex coincidence is not enough: the interface triangulations must be
    # identical, or the vertex-aliased coupling silently misrepresents the
    # trace.  Every projected interface face must be a plate triangle.
    plate_tris = {
        tuple(sorted(
            (round(float(x), 9), round(float(y), 9))
            for x, y in plate.triangle_vertices(t)
        ))
        for t in range(plate.n_triangles)
    }
    for b in np.flatnonzero(body.boundary_tags == FaceTag.INTERFACE):
        tri = body.boundary_faces[b]
        key = tuple(sorted(
            (round(float(x), 9), round(float(y), 9))
            for x, y in body.vertices[tri][:, :2]
        ))
        if key not in plate_tris:
            raise ValueError(
                "meshes do not match on the interface; the displacement method "
                "requires plate n = 2 x body n with the same diagonal convention"
            )

    plate_vertex_at: dict[tuple, int] = {
        (round(float(x), 9), round(float(y), 9)): i
        for i, (x, y) in enumerate(plate.vertices)
    }
    nv_body3 = 3 * body.n_vertices
    plate_offset = nv_body3
    n_unified = nv_body3 + pmap.n_dofs
    body_to_unified = np.arange(nv_body3, dtype=np.int64)
    aliased = []
    for v in cmap.interface_vertices:
        x, y = body.vertices[v, 0], body.vertices[v, 1]
        pv = plate_vertex_at.get((round(float(x), 9), round(float(y), 9)))
        if pv is None:
            raise ValueError(
                "meshes do not match on the interface; the displacement method "
                "requires plate n = 2 x body n with the same diagonal convention"
            )
        body_to_unified[3 * v + 0] = plate_offset + 2 * pv + 0
        body_to_unified[3 * v + 1] = plate_offset + 2 * pv + 1
        body_to_unified[3 * v + 2] = plate_offset + 2 * plate.n_vertices + pv
        aliased.extend([3 * v + 0, 3 * v + 1, 3 * v + 2])
    aliased = np.asarray(aliased, dtype=np.int64)

    acc = _COO()
    rhs = np.zeros(n_unified)

    # Body stiffness and volume load.
    rule = tet_rule(quad_volume)
    for t in range(body.n_tets):
        verts = body.tet_vertices(t)
        el = VectorP1Tet(verts)
        strain = el.strain()
        sig = c0_apply(strain, params)
        k_loc = el.volume * np.einsum("iab,jab->ij", sig, strain)
        gl = body_to_unified[cmap.ltg[t]]
        acc.add_block(gl, gl, k_loc)
        w = physical_weights(rule, el.volume)
        pts = rule.points @ verts
        fv = case.f_body(pts)
        loc = np.einsum("q,qa,qc->ac", w, rule.points, fv).reshape(12)
        np.add.at(rhs, gl, loc)

    # Traction (Neumann) term on the free boundary.
    frule = triangle_rule(quad_interface)
    for b in np.flatnonzero(body.boundary_tags == FaceTag.FREE):
        tri = body.boundary_faces[b]
        coords = body.vertices[tri]
        nrm = np.cross(coords[1] - coords[0], coords[2] - coords[0])
        area = 0.5 * np.linalg.norm(nrm)
        nrm = nrm / (2.0 * area)
        pts = frule.points @ coords
        w = physical_weights(frule, area)
        g = case.traction(pts, nrm)
        loc = np.einsum("q,qa,qc->ac", w, frule.points, g)  # (3, 3)
        for a in range(3):
            for c in range(3):
                rhs[body_to_unified[3 * int(tri[a]) + c]] += loc[a, c]

    # Plate stiffness and loads (jump tested with the actual plate basis).
    Kp = assemble_plate_stiffness(plate, pmap, params, region="all")
    Kp = Kp.tocoo()
    acc.rows.append(Kp.row + plate_offset)
    acc.cols.append(Kp.col + plate_offset)
    acc.vals.append(Kp.data)
    _, f_W = assemble_loads(
        body, BodyDGDofMap(body), plate, pmap, case,
        quad_volume=quad_volume, quad_interface=quad_interface, lowered_jump=False,
    )
    rhs[plate_offset:] += f_W

    K = acc.build((n_unified, n_unified))
    clamped = np.flatnonzero(pmap.constrained) + plate_offset
    idx = np.concatenate([aliased, clamped])
    vals = np.zeros(idx.shape[0])
    constraints = Constraints(n_unified, idx, vals)
    return DisplacementSystem(
        body=body, plate=plate, cmap=cmap, pmap=pmap, params=params,
        K=K, rhs=rhs, constraints=constraints,
        body_to_unified=body_to_unified, plate_offset=plate_offset,
    )
