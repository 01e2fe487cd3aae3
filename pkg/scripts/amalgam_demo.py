#!/usr/bin/env python3
"""Run the amalgamation pipeline on the standard formations and print results."""

import argparse

from flechains import AmalgamFailure, amalgamate, bunch_classify, strong_ap_counterwitness
from flechains.samples import (
    corner_formation,
    identity_formation,
    j_layer,
    mixed_formation,
    sugihara_formation,
)


def describe(name, formation, seed):
    print(f"== {name} ==")
    result = amalgamate(formation, verify_seed=seed)
    if isinstance(result, AmalgamFailure):
        print(f"  rejected [{result.code}] at node {result.node}: {result.detail}")
        return
    w = result.w
    cls = bunch_classify(w)
    print(f"  skeleton: {' < '.join(str(n) for n in w.skeleton.nodes)}")
    print(f"  labels:   {' '.join(w.skeleton.labels)}")
    print(f"  ranks:    {[g.rank for g in w.system.groups]}")
    print(f"  class:    rank={cls.rank} symm={cls.symm}")
    print(f"  method:   {result.construction}")
    print(f"  verification: {result.report.render()}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    describe("three odd all-trivial chains", sugihara_formation(), args.seed)
    describe("the integers into two planes", corner_formation(), args.seed)
    describe("mixed trivial and integer layers", mixed_formation(), args.seed)
    describe("a formation with a J node", identity_formation(j_layer()), args.seed)

    print("== strong amalgamation counterwitness ==")
    witness = strong_ap_counterwitness()
    print(f"  node {witness.node}: y={list(witness.y_element)} z={list(witness.z_element)}"
          f" merge to {list(witness.merged_image)}")
    print(f"  {witness.note}")


if __name__ == "__main__":
    main()
