"""
Vertex permutations
"""
from typing import Iterable, Optional

import numpy as np

from ..errors import DimensionMismatchError, InvalidParameterError


class PermutationMap:
    """
    A bijection sigma on {0, ..., n-1}

    ``image[v]`` is sigma(v). The permutation matrix P of sigma has
    P[v, sigma(v)] = 1, so (P B P^T)[i, j] = B[sigma(i), sigma(j)].
    """

    def __init__(self, image: Iterable[int], inverse: Optional[np.ndarray] = None):
        image = np.array(image, dtype=np.int64)
        if image.ndim != 1:
            raise InvalidParameterError("Permutation image must be one-dimensional")
        n = len(image)
        if inverse is None:
            if n and (image.min() < 0 or image.max() >= n):
                raise InvalidParameterError("Permutation image outside [0, n)")
            inverse = np.full(n, -1, dtype=np.int64)
            inverse[image] = np.arange(n)
            if (inverse < 0).any():
                raise InvalidParameterError("Permutation image is not a bijection")
        image.setflags(write=False)
        inverse = np.asarray(inverse, dtype=np.int64)
        inverse.setflags(write=False)
        self.image = image
        self.inverse_image = inverse

    @classmethod
    def identity(cls, n: int) -> "PermutationMap":
        ident = np.arange(n)
        return cls(ident, ident)

    @classmethod
    def random(cls, n: int, rng) -> "PermutationMap":
        """Uniform permutation (argsort of n uniforms)"""
        return cls(np.argsort(rng.uniforms(n), kind="stable"))

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, v):
        return self.image[v]

    def inverse(self) -> "PermutationMap":
        return PermutationMap(self.inverse_image, self.image)

    def compose(self, other: "PermutationMap") -> "PermutationMap":
        """self after other: v -> self(other(v))"""
        if other.n != self.n:
            raise DimensionMismatchError("Cannot compose permutations of different sizes")
        return PermutationMap(self.image[other.image])

    def fixed_points(self) -> np.ndarray:
        return self.image == np.arange(self.n)

    def shuffle_count(self) -> int:
        """Number of vertices v with sigma(v) != v (membership in Pi_{n,k})"""
        return int(self.n - np.count_nonzero(self.fixed_points()))

    def is_identity(self) -> bool:
        return self.shuffle_count() == 0

    def as_matrix(self) -> np.ndarray:
        matrix = np.zeros((self.n, self.n), dtype=np.int64)
        matrix[np.arange(self.n), self.image] = 1
        return matrix

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PermutationMap):
            return NotImplemented
        return np.array_equal(self.image, other.image)

    def __hash__(self):
        return hash(self.image.tobytes())

    def __repr__(self) -> str:
        if self.n <= 12:
            return f"PermutationMap({self.image.tolist()})"
        return f"PermutationMap(n={self.n}, shuffled={self.shuffle_count()})"


def shuffle_count(p: PermutationMap) -> int:
    return p.shuffle_count()
