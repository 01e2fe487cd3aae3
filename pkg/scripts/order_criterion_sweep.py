#!/usr/bin/env python3
"""Cross-validate the order-preservation criterion against brute force.

Generates seeded random homs between plain lex lattices and compares the
column-dominance decision with exhaustive checking over a coordinate box.
"""

import argparse
import random
import time

from flechains import OGroupHom, hom_order_preserving, int_lex


def brute_force_order_preserving(matrix, source_rank, target_rank, bound):
    """Exhaustive check over the box, written directly against the definition."""
    from itertools import product

    def lex_nonneg(v):
        for x in v:
            if x:
                return x > 0
        return True

    for coords in product(range(-bound, bound + 1), repeat=source_rank):
        if lex_nonneg(coords):
            image = tuple(sum(matrix[r][c] * coords[c] for c in range(source_rank)) for r in range(target_rank))
            if not lex_nonneg(image):
                return False
    return True


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--homs", type=int, default=200)
    parser.add_argument("--entry-bound", type=int, default=3)
    parser.add_argument("--box", type=int, default=5)
    parser.add_argument("--max-rank", type=int, default=3)
    parser.add_argument("--seed", type=int, default=1)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    started = time.perf_counter()
    disagreements = 0
    positives = 0
    for _ in range(args.homs):
        source_rank = rng.randint(1, args.max_rank)
        target_rank = rng.randint(1, args.max_rank)
        matrix = tuple(
            tuple(rng.randint(-args.entry_bound, args.entry_bound) for _ in range(source_rank))
            for _ in range(target_rank)
        )
        hom = OGroupHom(int_lex(source_rank), int_lex(target_rank), matrix)
        claimed = hom_order_preserving(hom)
        observed = brute_force_order_preserving(matrix, source_rank, target_rank, args.box)
        positives += claimed
        if claimed != observed:
            disagreements += 1
            print(f"disagreement: {matrix} criterion={claimed} brute={observed}")
    elapsed = time.perf_counter() - started
    print(f"{args.homs} homs, {positives} order preserving, "
          f"{disagreements} disagreements, {elapsed:.2f}s")


if __name__ == "__main__":
    main()
