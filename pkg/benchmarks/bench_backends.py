"""Compare the numba and numpy jet kernels.

Each backend runs in its own interpreter because the backend is fixed at
import time by the LIGHTLIKE_NO_NUMBA environment variable.

    python3 benchmarks/bench_backends.py [--batch 100000] [--repeat 5]
"""
import argparse
import json
import os
import subprocess
import sys
import textwrap

WORKER = textwrap.dedent("""
    import json, sys, time
    import numpy as np
    from lightlike import _kernels
    from lightlike.catalog import random_null_ruled
    from lightlike.classify import classify_surface

    batch, repeat = int(sys.argv[1]), int(sys.argv[2])
    rng = np.random.default_rng(0)
    a = rng.standard_normal((batch, 10))
    b = rng.standard_normal((batch, 10))
    h = rng.standard_normal((batch, 10)); h[:, 0] = 0.0
    fk = rng.standard_normal((batch, 4))

    def best(fn):
        fn()  # warm-up, includes JIT compilation
        times = []
        for _ in range(repeat):
            t = time.perf_counter(); fn(); times.append(time.perf_counter() - t)
        return min(times)

    surface = random_null_ruled(0)
    out = {
        "backend": _kernels.BACKEND,
        "mul_s": best(lambda: _kernels.mul(a, b, 3)),
        "horner_s": best(lambda: _kernels.horner(h, fk, 3)),
        "classify_10x10_s": best(lambda: classify_surface(surface, (10, 10))),
        "checksum": float(_kernels.mul(a, b, 3).sum() + _kernels.horner(h, fk, 3).sum()),
    }
    print(json.dumps(out))
""")


def run(no_numba, batch, repeat):
    env = dict(os.environ, LIGHTLIKE_NO_NUMBA="1" if no_numba else "0")
    proc = subprocess.run([sys.executable, "-c", WORKER, str(batch), str(repeat)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--batch", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rows = [run(False, args.batch, args.repeat), run(True, args.batch, args.repeat)]
    print(f"{'backend':8s} {'mul':>10s} {'horner':>10s} {'classify 10x10':>15s}")
    for r in rows:
        print(f"{r['backend']:8s} {r['mul_s']:10.4f} {r['horner_s']:10.4f} {r['classify_10x10_s']:15.4f}")
    agree = abs(rows[0]["checksum"] - rows[1]["checksum"]) <= 1e-9 * max(1.0, abs(rows[1]["checksum"]))
    print(f"speed-up on batched mul: {rows[1]['mul_s'] / rows[0]['mul_s']:.1f}x; "
          f"results agree: {agree}")


if __name__ == "__main__":
    main()
