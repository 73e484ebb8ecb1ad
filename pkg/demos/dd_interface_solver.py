"""Domain decomposition: solving the coupled system through its interface.

Instead of assembling one monolithic saddle-point system, the coupled
problem can be reduced to the interface DOFs of the plate: the body
contributes a traction response operator (solve the body with given
interface displacement, return the resulting interface load), the plate a
stiffness response.  A preconditioned conjugate gradient iteration on that
small interface unknown converges in a handful of iterations, independent of
the mesh level, because the preconditioned operator is a compact
perturbation of the identity in the plate-energy inner product.

Each run is compared against the monolithic solve of the same configuration.
"""

import numpy as np

from bodyplate.domain_decomposition import solve_dd
from bodyplate.geometry_mesh import Diagonal, build_body_mesh, build_plate_mesh
from bodyplate.manufactured import default_case
from bodyplate.verification_cli import solve_mixed

case = default_case()

for n_body in (2, 4):
    body = build_body_mesh(n_body)
    plate = build_plate_mesh(2 * n_body, Diagonal.SAME_AS_BODY)
    sol = solve_dd(body, plate, case)
    r = sol.report

    print(f"--- body n={n_body}, plate n={2 * n_body} "
          f"({sol.x_gamma.size} interface unknowns) ---")
    print(f"converged in {r.iterations} iterations, "
          f"average reduction {r.rho_avg:.4f}")
    print("residual history:",
          "  ".join(f"{h:.2e}" for h in r.history_u))

    mono, _ = solve_mixed(body, plate, case)
    num = np.sqrt(np.linalg.norm(sol.sigma - mono.sigma) ** 2
                  + np.linalg.norm(sol.u - mono.u) ** 2
                  + np.linalg.norm(sol.w - mono.w) ** 2)
    den = np.sqrt(np.linalg.norm(mono.sigma) ** 2
                  + np.linalg.norm(mono.u) ** 2
                  + np.linalg.norm(mono.w) ** 2)
    print(f"relative difference vs monolithic solve: {num / den:.2e}")
    print(f"junction residual: {sol.junction_residual:.2e}\n")

print("iteration counts stay flat under refinement; the reconstruction")
print("agrees with the monolithic solution to far better than the CG")
print("tolerance of 1e-6.")
