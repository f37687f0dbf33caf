"""Connections on free modules over the de Rham-Witt complex."""
from __future__ import annotations

from ..errors import RankMismatch
from ..witt import WittVector
from .forms import DrwForm, witt_to_drw


class DrwConnection:
    """(nabla s)_i = d s_i + sum_j M[i][j] s_j with M a matrix of 1-forms."""

    def __init__(self, matrix):
        self.matrix = tuple(tuple(row) for row in matrix)
        self.rank = len(self.matrix)
        if any(len(row) != self.rank for row in self.matrix):
            raise RankMismatch("connection matrix is not square")
        first = self.matrix[0][0]
        self.p, self.N, self.nvars = first.p, first.N, first.nvars

    @classmethod
    def trivial(cls, rank, p, N, nvars):
        return cls([[DrwForm.zero(p, N, nvars) for _ in range(rank)] for _ in range(rank)])

    def __eq__(self, other):
        return isinstance(other, DrwConnection) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def to_json(self):
        return {"rank": self.rank, "matrix": [[w.to_text() for w in row] for row in self.matrix]}


def _as_form(s, N) -> DrwForm:
    return witt_to_drw(s) if isinstance(s, WittVector) else s


def drw_connection_apply_forms(M: DrwConnection, s: list) -> list:
    """nabla on a vector of forms of one degree."""
    if len(s) != M.rank:
        raise RankMismatch(f"section of length {len(s)} for rank {M.rank}")
    s = [_as_form(x, M.N) for x in s]
    out = []
    for i in range(M.rank):
        acc = s[i].d()
        for j in range(M.rank):
            if not s[j].is_zero() and not M.matrix[i][j].is_zero():
                acc = acc + M.matrix[i][j] * s[j]
        out.append(acc)
    return out


def drw_connection_apply(M: DrwConnection, s: list) -> list:
    """nabla of a section given by r Witt vectors (or degree-0 forms)."""
    return drw_connection_apply_forms(M, s)


def drw_curvature(M: DrwConnection) -> list:
    r = M.rank
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            acc = M.matrix[i][j].d()
            for k in range(r):
                acc = acc + M.matrix[i][k] * M.matrix[k][j]
            row.append(acc)
        out.append(row)
    return out
