"""Cartan data for type C_n and for the rank-one algebra sl_2."""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import InvalidRank


@dataclass(frozen=True)
class CartanData:
    """Cartan matrix ``C``, symmetrizers ``d`` and ``B = diag(d) C``.

    Nodes are numbered 1..rank in the public API; the matrices are stored
    as 0-indexed tuples.
    """

    rank: int
    C: tuple
    d: tuple
    B: tuple = field(init=False)

    def __post_init__(self):
        n = self.rank
        if n < 1 or len(self.C) != n or len(self.d) != n:
            raise InvalidRank(f"inconsistent Cartan data of rank {n}")
        B = tuple(tuple(self.d[i] * self.C[i][j] for j in range(n)) for i in range(n))
        object.__setattr__(self, "B", B)

    def c(self, i: int, j: int) -> int:
        """Entry C_{ij} with 1-based node indices."""
        return self.C[i - 1][j - 1]

    def di(self, i: int) -> int:
        return self.d[i - 1]

    def b(self, i: int, j: int) -> int:
        return self.B[i - 1][j - 1]

    @property
    def nodes(self):
        return range(1, self.rank + 1)

    def to_dict(self):
        return {"rank": self.rank, "C": [list(r) for r in self.C], "d": list(self.d)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data) -> "CartanData":
        return cls(int(data["rank"]), tuple(tuple(r) for r in data["C"]), tuple(data["d"]))

    def fingerprint(self) -> str:
        return self.to_json()


def build_type_c(n: int) -> CartanData:
    """Cartan data of type C_n with the long simple root at node n."""
    if not isinstance(n, int) or n < 2:
        raise InvalidRank(f"type C needs rank >= 2, got {n!r}")
    C = [[0] * n for _ in range(n)]
    for i in range(n):
        C[i][i] = 2
        if i + 1 < n:
            C[i][i + 1] = -1
            C[i + 1][i] = -1
    C[n - 2][n - 1] = -2
    d = [1] * (n - 1) + [2]
    return CartanData(n, tuple(tuple(r) for r in C), tuple(d))


def build_sl2() -> CartanData:
    """Rank-one data, A_1 = sl_2."""
    return CartanData(1, ((2,),), (1,))


def build_cartan(n: int) -> CartanData:
    """Type C_n for n >= 2 and sl_2 for n == 1."""
    if n == 1:
        return build_sl2()
    return build_type_c(n)
