"""Independent brute-force oracles used only by the tests.

These deliberately avoid the package's vectorized code paths: the
polynomial oracle expands every input monomial against every pair of
row entries with plain Python complex arithmetic, and the MAP oracle
enumerates posteriors pattern by pattern.
"""

import cmath


def polynomial_distribution(setup, phases, state_amps):
    """Click-pattern probabilities by direct monomial expansion."""
    rows = {}
    for row in setup.rows:
        factor = cmath.exp(1j * phases[row.phase_slot])
        rows[row.input_mode] = [(det, coeff * factor) for det, coeff in row.entries]
    order = {name: i for i, name in enumerate(setup.detectors)}
    poly = {}
    dim = setup.dim
    for i in range(dim):
        for j in range(dim):
            psi = complex(state_amps[i][j])
            if psi == 0:
                continue
            for du, cu in rows[f"a{i}"]:
                for dv, cv in rows[f"b{j}"]:
                    key = tuple(sorted((du, dv), key=order.__getitem__))
                    poly[key] = poly.get(key, 0j) + psi * cu * cv
    total = sum(abs(c) ** 2 for c in poly.values())
    return {k: abs(c) ** 2 / total for k, c in poly.items()}


def sympy_distribution(setup, phases, state_amps):
    """Same expansion via sympy symbols, for a second independent route."""
    import sympy

    dets = {name: sympy.Symbol(name) for name in setup.detectors}
    subs = {}
    for row in setup.rows:
        factor = cmath.exp(1j * phases[row.phase_slot])
        expr = sum(dets[det] * sympy.nsimplify(coeff * factor, rational=False)
                   for det, coeff in row.entries)
        subs[row.input_mode] = expr
    dim = setup.dim
    poly = sympy.expand(
        sum(
            complex(state_amps[i][j]) * subs[f"a{i}"] * subs[f"b{j}"]
            for i in range(dim)
            for j in range(dim)
        )
    )
    symbols = [dets[name] for name in setup.detectors]
    coeffs = {}
    for monom, coeff in sympy.Poly(poly, *symbols).terms():
        names = []
        for name, power in zip(setup.detectors, monom):
            names.extend([name] * power)
        key = (names[0], names[-1])
        coeffs[key] = coeffs.get(key, 0j) + complex(coeff)
    total = sum(abs(c) ** 2 for c in coeffs.values())
    return {k: abs(c) ** 2 / total for k, c in coeffs.items()}


def map_decode(likelihood_rows):
    """Exhaustive MAP: per pattern, posterior and lowest-index argmax.

    ``likelihood_rows[k][i]`` = P(pattern i | state k).  Returns
    (assignment, posterior) as plain lists; unreachable patterns get
    assignment -1.
    """
    nstates = len(likelihood_rows)
    npat = len(likelihood_rows[0])
    assignment = []
    posterior = [[0.0] * npat for _ in range(nstates)]
    for i in range(npat):
        col = [likelihood_rows[k][i] for k in range(nstates)]
        total = sum(col)
        if total == 0:
            assignment.append(-1)
            continue
        best_k, best_p = 0, -1.0
        for k in range(nstates):
            posterior[k][i] = col[k] / total
            if col[k] > best_p:
                best_k, best_p = k, col[k]
        assignment.append(best_k)
    return assignment, posterior
