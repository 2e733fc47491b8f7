#!/usr/bin/env python3
# Copyright 2026 The seqsynth Authors. All rights reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Regenerates fixtures/stripped_small and fixtures/bfiles/."""

import math
import os
import sys

STORED = 30
EXTRA = 100


def primes(n):
    out, k = [], 2
    while len(out) < n:
        if all(k % p for p in out if p * p <= k):
            out.append(k)
        k += 1
    return out


def fib(n):
    a, b, out = 0, 1, []
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return out


def tri_col(n):
    out = []
    a = 0
    while len(out) < n:
        out.extend(range(a + 1))
        a += 1
    return out[:n]


def palindromes(n):
    return [v for v in range(10 ** 6) if str(v) == str(v)[::-1]][:n]


def phi(m):
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


# (number, offset, generator(count) -> list)
SEQUENCES = [
    (4, 0, lambda n: [0] * n),
    (12, 0, lambda n: [1] * n),
    (27, 1, lambda n: list(range(1, n + 1))),
    (40, 1, primes),
    (45, 0, fib),
    (79, 0, lambda n: [2 ** i for i in range(n)]),
    (142, 0, lambda n: [math.factorial(i) for i in range(n)]),
    (217, 0, lambda n: [i * (i + 1) // 2 for i in range(n)]),
    (290, 0, lambda n: [i * i for i in range(n)]),
    (578, 0, lambda n: [i ** 3 for i in range(n)]),
    (1477, 0, lambda n: list(range(n))),
    (5843, 0, lambda n: [2 * i for i in range(n)]),
    (10, 1, lambda n: [phi(m) for m in range(1, n + 1)]),
    (1813, 0, lambda n: [math.factorial(2 * i) // math.factorial(i) for i in range(n)]),
    (2262, 0, tri_col),
    (14187, 0, lambda n: [p ** 3 for p in palindromes(n)]),
]

WITH_BFILE = {40, 45, 142, 290, 1813, 2262, 14187}


def main(out_dir):
    os.makedirs(os.path.join(out_dir, "bfiles"), exist_ok=True)
    with open(os.path.join(out_dir, "stripped_small"), "w") as f:
        f.write("# Small OEIS-style fixture: A-number followed by terms.\n")
        for num, offset, gen in SEQUENCES:
            terms = gen(STORED)
            f.write("A%06d ,%s,\n" % (num, ",".join(str(t) for t in terms)))
            if num in WITH_BFILE:
                allterms = gen(STORED + EXTRA)
                path = os.path.join(out_dir, "bfiles", "b%06d.txt" % num)
                with open(path, "w") as b:
                    b.write("# A%06d\n" % num)
                    for i, t in enumerate(allterms):
                        b.write("%d %d\n" % (i + offset, t))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
