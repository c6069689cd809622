"""Self-dual embedded primal-dual interior-point solver for the moment/sos
pair.

The pair
    (moment)  min c.x  s.t.  sum_p x_p F_p - F0  psd
    (sos)     max <F0, Y>  s.t.  <F_p, Y> = c_p,  Y psd
is solved through the homogeneous embedding (x, tau, Y, Z, kappa) with HKM
search directions, a Mehrotra predictor-corrector, and dense block algebra.
Both objective values are reported; tau -> 0 with kappa bounded away flags
an infeasibility certificate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .relax import SdpInstance

STEP_FRACTION = 0.98
MAX_ITER = 200


@dataclass
class SolveResult:
    primal_value: float | None  # moment objective (includes the constant term)
    dual_value: float | None  # sos objective
    status: str  # optimal | infeasible-suspected | max-iter
    iterations: int
    x: np.ndarray | None = None
    y_blocks: list | None = None
    rel_gap: float = float("nan")


def _dense_blocks(inst: SdpInstance):
    """Numpy F-matrices per block: F[0] is F0 (= -constant part)."""
    m = inst.nmoments
    blocks = []
    for b in inst.blocks:
        if b.size == 0:
            continue
        F = np.zeros((m + 1, b.size, b.size))
        for a, entries in b.coeffs.items():
            for i, j, c in entries:
                v = float(c)
                sign = -1.0 if a == 0 else 1.0
                F[a][i, j] += sign * v
                if i != j:
                    F[a][j, i] += sign * v
        blocks.append(F)
    return blocks


class _Presolve:
    """Exact elimination of the moment equality rows.

    The equality block carries rows L(x^a h_j) = 0 as +/- diagonal pairs;
    internally they are solved over the rationals: y = y0 + N z with a
    rational particular solution and nullspace basis, and the psd blocks are
    rewritten in the reduced variables.  This keeps the cone part strictly
    feasible where possible and removes the singular directions the pair
    encoding would create.
    """

    def __init__(self, inst: SdpInstance):
        from fractions import Fraction

        self.inst = inst
        m = inst.nmoments
        eq_rows: list[list[Fraction]] = []
        eq_rhs: list[Fraction] = []
        psd_blocks = []
        for b in inst.blocks:
            if b.size == 0:
                continue
            if not b.diag:
                psd_blocks.append(b)
                continue
            rows: dict[int, dict[int, Fraction]] = {}
            for a, entries in b.coeffs.items():
                for i, j, c in entries:
                    if i % 2:  # odd row: the negated copy
                        continue
                    rows.setdefault(i // 2, {})[a] = rows.get(i // 2, {}).get(a, Fraction(0)) + c
            for r in sorted(rows):
                row = [Fraction(0)] * m
                rhs = Fraction(0)
                for a, c in rows[r].items():
                    if a == 0:
                        rhs -= c
                    else:
                        row[a - 1] = c
                eq_rows.append(row)
                eq_rhs.append(rhs)
        self.psd_blocks = psd_blocks
        self.feasible = True
        if not eq_rows:
            self.particular = [Fraction(0)] * m
            self.basis = [[Fraction(1) if i == q else Fraction(0) for i in range(m)] for q in range(m)]
            return
        aug = [row[:] + [b] for row, b in zip(eq_rows, eq_rhs)]
        pivots: list[int] = []
        r = 0
        for col in range(m):
            piv = next((i for i in range(r, len(aug)) if aug[i][col]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            f = aug[r][col]
            aug[r] = [v / f for v in aug[r]]
            for i in range(len(aug)):
                if i != r and aug[i][col]:
                    g = aug[i][col]
                    aug[i] = [a - g * bb for a, bb in zip(aug[i], aug[r])]
            pivots.append(col)
            r += 1
        for i in range(r, len(aug)):
            if aug[i][m]:
                self.feasible = False
                self.particular = [Fraction(0)] * m
                self.basis = []
                return
        free = [c for c in range(m) if c not in pivots]
        particular = [Fraction(0)] * m
        for rr, col in enumerate(pivots):
            particular[col] = aug[rr][m]
        basis = []
        for fc in free:
            v = [Fraction(0)] * m
            v[fc] = Fraction(1)
            for rr, col in enumerate(pivots):
                v[col] = -aug[rr][fc]
            basis.append(v)
        self.particular = particular
        self.basis = basis

    def reduced_data(self):
        """(F-blocks over reduced vars, c_reduced, const_shift, keep_mask)."""
        inst = self.inst
        m = inst.nmoments
        mz = len(self.basis)
        c_full = np.zeros(m)
        const = 0.0
        for a, v in inst.objective.items():
            if a == 0:
                const = float(v)
            else:
                c_full[a - 1] = float(v)
        part = np.array([float(v) for v in self.particular])
        Nmat = np.array([[float(x) for x in col] for col in self.basis]).T if mz else np.zeros((m, 0))
        Fb = []
        for b in self.psd_blocks:
            F = np.zeros((m + 1, b.size, b.size))
            for a, entries in b.coeffs.items():
                for i, j, c in entries:
                    v = float(c)
                    sign = -1.0 if a == 0 else 1.0
                    F[a][i, j] += sign * v
                    if i != j:
                        F[a][j, i] += sign * v
            F0 = F[0] - np.tensordot(part, F[1:], axes=(0, 0))
            Fz = np.einsum("pab,pq->qab", F[1:], Nmat) if mz else np.zeros((0, b.size, b.size))
            Fb.append(np.concatenate([F0[None, :, :], Fz], axis=0))
        c_red = Nmat.T @ c_full if mz else np.zeros(0)
        const += float(c_full @ part)
        # variables appearing nowhere: irrelevant (coeff 0) or unbounded (coeff != 0)
        active = np.zeros(mz, dtype=bool)
        for F in Fb:
            norms = np.abs(F[1:]).reshape(mz, -1).sum(axis=1) if mz else np.zeros(0)
            active |= norms > 0
        unbounded = bool(np.any(~active & (np.abs(c_red) > 1e-15)))
        keep = active
        Fb = [np.concatenate([F[:1], F[1:][keep]], axis=0) for F in Fb]
        return Fb, c_red[keep], const, keep, unbounded

    def lift_x(self, z_kept: np.ndarray, keep) -> np.ndarray:
        mz = len(self.basis)
        z = np.zeros(mz)
        z[keep] = z_kept
        part = np.array([float(v) for v in self.particular])
        if mz == 0:
            return part
        Nmat = np.array([[float(x) for x in col] for col in self.basis]).T
        return part + Nmat @ z


def _objective_vector(inst: SdpInstance):
    c = np.zeros(inst.nmoments)
    const = 0.0
    for a, v in inst.objective.items():
        if a == 0:
            const = float(v)
        else:
            c[a - 1] = float(v)
    return c, const


def _max_step(Z: np.ndarray, dZ: np.ndarray) -> float:
    """Largest alpha with Z + alpha dZ psd (Z pd up to roundoff)."""
    Zs = (Z + Z.T) / 2
    evals, vecs = np.linalg.eigh(Zs)
    evals = np.maximum(evals, 1e-14 * max(1.0, float(evals.max())))
    inv_half = vecs @ np.diag(evals**-0.5) @ vecs.T
    W = inv_half @ ((dZ + dZ.T) / 2) @ inv_half
    lam = np.linalg.eigvalsh((W + W.T) / 2).min()
    if lam >= 0:
        return np.inf
    return -1.0 / lam


def solve_pair(
    inst: SdpInstance, tol: float = 1e-8, max_iter: int = MAX_ITER, verbose: bool = False
) -> SolveResult:
    """Solve the embedded pair after exact equality-row elimination."""
    pre = _Presolve(inst)
    if not pre.feasible:
        return SolveResult(None, None, "infeasible-suspected", 0)
    Fb, c, const, keep, unbounded = pre.reduced_data()
    if unbounded:
        return SolveResult(None, None, "infeasible-suspected", 0)
    res = _solve_core(Fb, c, const, tol, max_iter, verbose)
    if res.x is not None:
        res.x = pre.lift_x(res.x, keep)
    return res


def _solve_core(
    Fb: list, c: np.ndarray, const: float, tol: float, max_iter: int, verbose: bool
) -> SolveResult:
    m = len(c)
    sizes = [F.shape[1] for F in Fb]
    N = sum(sizes) + 1  # barrier parameter count (tau/kappa included)

    x = np.zeros(m)
    tau = 1.0
    kappa = 1.0
    Z = [np.eye(s) for s in sizes]
    Y = [np.eye(s) for s in sizes]

    def A_of(xv, tv):
        return [
            np.tensordot(xv, F[1:], axes=(0, 0)) - tv * F[0] if m else -tv * F[0]
            for F in Fb
        ]

    def Astar(Ys):
        out = np.zeros(m)
        for F, Yb in zip(Fb, Ys):
            out += np.tensordot(F[1:], Yb, axes=([1, 2], [0, 1]))
        return out

    def F0dot(Ys):
        return sum(float(np.tensordot(F[0], Yb)) for F, Yb in zip(Fb, Ys))

    status = "max-iter"
    it = 0
    for it in range(1, max_iter + 1):
        AX = A_of(x, tau)
        Rp = [Zb - AXb for Zb, AXb in zip(Z, AX)]  # want A(x) - F0 tau = Z
        Rd = c * tau - Astar(Y)
        G = float(c @ x) - F0dot(Y) - kappa
        mu = (sum(float(np.tensordot(Zb, Yb)) for Zb, Yb in zip(Z, Y)) + tau * kappa) / N

        pobj = float(c @ x) / tau + const
        dobj = F0dot(Y) / tau + const
        relgap = abs(pobj - dobj) / (1 + max(abs(pobj), abs(dobj)))
        prim_res = (
            np.sqrt(sum(float(np.linalg.norm(r) ** 2) for r in Rp)) / tau
        ) / (1 + np.sqrt(sum(float(np.linalg.norm(F[0]) ** 2) for F in Fb)))
        dual_res = float(np.linalg.norm(Rd)) / tau / (1 + float(np.linalg.norm(c)))
        if verbose:
            print(
                f"  it {it:3d} mu={mu:.2e} tau={tau:.2e} kappa={kappa:.2e} "
                f"gap={relgap:.2e} rp={prim_res:.2e} rd={dual_res:.2e} "
                f"p={pobj:.6f} d={dobj:.6f}"
            )
        if relgap < tol and prim_res < tol and dual_res < tol:
            status = "optimal"
            break
        if tau < 1e-9 and kappa > 1e4 * tau:
            status = "infeasible-suspected"
            break

        Zinv = [np.linalg.inv(Zb) for Zb in Z]

        # Schur data
        M = np.zeros((m, m))
        w = np.zeros(m)
        m0 = np.zeros(m)
        u = np.zeros(m)
        w0 = 0.0
        u0 = 0.0
        for F, Zi, Yb, Rpb in zip(Fb, Zinv, Y, Rp):
            ZiF = np.einsum("ab,pbc->pac", Zi, F[1:]) if m else None
            FY = np.einsum("pab,bc->pac", F[1:], Yb) if m else None
            if m:
                M += np.einsum("pab,qba->pq", ZiF, FY)
                ZiF0Y = Zi @ F[0] @ Yb
                w += np.tensordot(F[1:], ZiF0Y.T, axes=([1, 2], [1, 0]))
                m0 += np.einsum("ab,pba->p", F[0], np.einsum("ab,pbc->pac", Zi, FY))
                ZiRpY = Zi @ Rpb @ Yb
                u += np.tensordot(F[1:], ZiRpY.T, axes=([1, 2], [1, 0]))
            w0 += float(np.tensordot(F[0], Zi @ F[0] @ Yb))
            u0 += float(np.tensordot(F[0], Zi @ Rpb @ Yb))
        M = (M + M.T) / 2 + 1e-13 * np.eye(m)

        def solve_direction(Cb, c_tau):
            """Direction for complementarity targets C (per block) and c_tau."""
            v = np.zeros(m)
            v0 = 0.0
            for F, Zi, Cblk in zip(Fb, Zinv, Cb):
                ZiC = Zi @ Cblk
                if m:
                    v += np.tensordot(F[1:], ZiC.T, axes=([1, 2], [1, 0]))
                v0 += float(np.tensordot(F[0], ZiC))
            lhs = np.zeros((m + 1, m + 1))
            rhs = np.zeros(m + 1)
            lhs[:m, :m] = M
            lhs[:m, m] = c - w
            lhs[m, :m] = c + m0
            lhs[m, m] = kappa / tau - w0
            rhs[:m] = v + u - Rd
            rhs[m] = -G + v0 + u0 + c_tau / tau
            sol = np.linalg.solve(lhs, rhs)
            dx, dtau = sol[:m], sol[m]
            dZ = [
                (np.tensordot(dx, F[1:], axes=(0, 0)) if m else 0.0) - dtau * F[0] - Rpb
                for F, Rpb in zip(Fb, Rp)
            ]
            dY = []
            for Zi, Cblk, dZb, Yb in zip(Zinv, Cb, dZ, Y):
                raw = Zi @ (Cblk - dZb @ Yb)
                dY.append((raw + raw.T) / 2)
            dkappa = (c_tau - kappa * dtau) / tau
            return dx, dtau, dZ, dY, dkappa

        def step_length(dZ, dY, dtau, dkappa):
            alpha = 1.0
            for Zb, dZb in zip(Z, dZ):
                alpha = min(alpha, STEP_FRACTION * _max_step(Zb, dZb))
            for Yb, dYb in zip(Y, dY):
                alpha = min(alpha, STEP_FRACTION * _max_step(Yb, dYb))
            if dtau < 0:
                alpha = min(alpha, -STEP_FRACTION * tau / dtau)
            if dkappa < 0:
                alpha = min(alpha, -STEP_FRACTION * kappa / dkappa)
            return max(alpha, 0.0)

        # predictor (affine)
        C_aff = [-(Zb @ Yb) for Zb, Yb in zip(Z, Y)]
        dx_a, dtau_a, dZ_a, dY_a, dk_a = solve_direction(C_aff, -tau * kappa)
        alpha_a = step_length(dZ_a, dY_a, dtau_a, dk_a)
        mu_aff = (
            sum(
                float(np.tensordot(Zb + alpha_a * dZb, Yb + alpha_a * dYb))
                for Zb, dZb, Yb, dYb in zip(Z, dZ_a, Y, dY_a)
            )
            + (tau + alpha_a * dtau_a) * (kappa + alpha_a * dk_a)
        ) / N
        sigma = min(1.0, max((mu_aff / mu) ** 3, 1e-8))

        # corrector
        C = [
            sigma * mu * np.eye(s) - Zb @ Yb - dZb @ dYb
            for s, Zb, Yb, dZb, dYb in zip(sizes, Z, Y, dZ_a, dY_a)
        ]
        c_tau = sigma * mu - tau * kappa - dtau_a * dk_a
        dx, dtau, dZ, dY, dkappa = solve_direction(C, c_tau)
        alpha = step_length(dZ, dY, dtau, dkappa)
        if alpha <= 1e-14 or not np.isfinite(alpha):
            # stalled at the boundary; accept if we are essentially converged
            status = (
                "optimal"
                if relgap < 1e3 * tol and prim_res < 1e3 * tol and dual_res < 1e3 * tol
                else "max-iter"
            )
            break
        x = x + alpha * dx
        tau = tau + alpha * dtau
        kappa = kappa + alpha * dkappa
        Z = [Zb + alpha * dZb for Zb, dZb in zip(Z, dZ)]
        Y = [Yb + alpha * dYb for Yb, dYb in zip(Y, dY)]

    pobj = float(c @ x) / tau + const
    dobj = F0dot(Y) / tau + const
    relgap = abs(pobj - dobj) / (1 + max(abs(pobj), abs(dobj)))
    if status == "infeasible-suspected":
        return SolveResult(None, None, status, it, None, None, relgap)
    yb = [Yb / tau for Yb in Y]
    return SolveResult(pobj, dobj, status, it, x / tau, yb, relgap)


def solve(inst: SdpInstance, tol: float = 1e-8) -> tuple[float | None, str]:
    """Value of the given side of the pair, with the solver status."""
    res = solve_pair(inst, tol=tol)
    value = res.primal_value if inst.side == "moment" else res.dual_value
    return value, res.status
