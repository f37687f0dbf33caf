"""Compare the compiled and pure-Python polynomial product kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import timeit

from dagwitt import kernels
from dagwitt.mpoly import MPoly


def dense_poly(rng, nvars, deg, p, prec):
    terms = {}
    for _ in range(deg ** nvars):
        e = tuple(rng.randint(0, deg) for _ in range(nvars))
        terms[e] = rng.randrange(p ** prec)
    return MPoly(terms, nvars, p, prec)


CASES = [
    ("1 var, deg 60, mod 3^4", 1, 60),
    ("2 vars, deg 12, mod 3^4", 2, 12),
    ("3 vars, deg 6, mod 3^4", 3, 6),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':28s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for label, nv, deg in CASES:
        f, g = dense_poly(rng, nv, deg, 3, 4), dense_poly(rng, nv, deg, 3, 4)
        times = {}
        ref = None
        for b in backends:
            kernels.set_backend(b)
            prod = f * g
            if ref is None:
                ref = prod
            assert prod == ref, "backends disagree"
            times[b] = min(timeit.repeat(lambda: f * g, number=3, repeat=args.repeat)) / 3
        speed = times["python"] / times["cython"] if "cython" in times else 1.0
        print(f"{label:28s}" + "".join(f"{times[b] * 1e3:10.2f}ms" for b in backends) + f"{speed:9.1f}x")


if __name__ == "__main__":
    main()
