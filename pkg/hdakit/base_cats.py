import itertools
import logging
import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple, Union
from hdakit.errors import ArityMismatch, FormatError, IndexOutOfRange, InvalidMap, ObjectMismatch


class Status(Enum):
    NOT_STARTED = "0"
    EXECUTING = "*"
    TERMINATED = "1"

    @staticmethod
    def of_polarity(k: int):
        if k == 0:
            return Status.NOT_STARTED
        elif k == 1:
            return Status.TERMINATED
        raise InvalidMap("polarity must be 0 or 1, got " + str(k))

    @property
    def polarity(self) -> int:
        if self == Status.EXECUTING:
            raise InvalidMap("an executing event has no polarity")
        return 0 if self == Status.NOT_STARTED else 1


class MapMode(Enum):
    CONCLIST = "conclist"
    CONCSET = "concset"


@dataclass(frozen=True)
class CanonicalObject:
    """
    The canonical carrier {1..n} with a label per position. Read as a conclist the positions
    carry the event order, read as a concset they are plain carrier indices.
    """
    labels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))

    @staticmethod
    def of(*labels: str):
        return CanonicalObject(tuple(labels))

    @property
    def arity(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def label(self, j: int) -> str:
        if not 1 <= j <= len(self.labels):
            raise IndexOutOfRange("position " + str(j) + " outside 1.." + str(len(self.labels)))
        return self.labels[j - 1]

    def remove(self, i: int):
        # labels of the face λ∘ι_i
        if not 1 <= i <= len(self.labels):
            raise IndexOutOfRange("index " + str(i) + " outside 1.." + str(len(self.labels)))
        return CanonicalObject(self.labels[:i - 1] + self.labels[i:])

    def permuted(self, theta):
        # labels λ∘θ⁻¹: the event at position q moves to slot θ(q)
        if theta.arity != len(self.labels):
            raise ArityMismatch("permutation on " + str(theta.arity) + " letters applied to object of arity " + str(len(self.labels)))
        labels = [""] * len(self.labels)
        for q, label in enumerate(self.labels, 1):
            labels[theta(q) - 1] = label
        return CanonicalObject(tuple(labels))

    def violations(self, alphabet: Iterable[str]) -> List[str]:
        alphabet = set(alphabet)
        return ["label " + label + " not in alphabet" for label in self.labels if label not in alphabet]

    def __str__(self):
        return "(" + str(len(self.labels)) + "," + ",".join(self.labels) + ")"


@dataclass(frozen=True)
class Permutation:
    """A bijection of {1..n} in one-line notation. p * q applies q first."""
    images: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise InvalidMap(str(list(self.images)) + " is not a permutation")

    @staticmethod
    def identity(n: int):
        return Permutation(tuple(range(1, n + 1)))

    @staticmethod
    def all(n: int) -> List:
        return [Permutation(images) for images in itertools.permutations(range(1, n + 1))]

    @staticmethod
    def parse(text: str):
        text = text.strip()
        if text.startswith("[") and text.endswith("]"):
            text = text[1:-1]
        try:
            return Permutation(tuple(int(part) for part in text.split(",") if len(part.strip()) > 0))
        except ValueError:
            raise FormatError("invalid permutation " + repr(text))

    @property
    def arity(self) -> int:
        return len(self.images)

    def __call__(self, j: int) -> int:
        if not 1 <= j <= len(self.images):
            raise IndexOutOfRange("position " + str(j) + " outside 1.." + str(len(self.images)))
        return self.images[j - 1]

    def inverse(self):
        inverse = [0] * len(self.images)
        for j, image in enumerate(self.images, 1):
            inverse[image - 1] = j
        return Permutation(tuple(inverse))

    def __mul__(self, other):
        if other.arity != self.arity:
            raise ArityMismatch("cannot compose permutations on " + str(self.arity) + " and " + str(other.arity) + " letters")
        return Permutation(tuple(self.images[image - 1] for image in other.images))

    def is_identity(self) -> bool:
        return self.images == tuple(range(1, len(self.images) + 1))

    def __str__(self):
        return "[" + ",".join(str(image) for image in self.images) + "]"


def insertion_map(i: int, n: int) -> Tuple[int, ...]:
    """The images ι_i(1), .., ι_i(n-1) in {1..n}; position i is skipped."""
    if not 1 <= i <= n:
        raise IndexOutOfRange("insertion index " + str(i) + " outside 1.." + str(n))
    return tuple(j if j < i else j + 1 for j in range(1, n))


def induced_face_permutation(theta: Permutation, i: int) -> Permutation:
    """
    d_iθ, the permutation on n-1 letters with ι_i ∘ d_iθ = θ ∘ ι_{θ⁻¹(i)}.
    """
    n = theta.arity
    if not 1 <= i <= n:
        raise IndexOutOfRange("face index " + str(i) + " outside 1.." + str(n))
    removed = theta.inverse()(i)
    images = []
    for j in insertion_map(removed, n):
        image = theta(j)
        images.append(image if image < i else image - 1)
    return Permutation(tuple(images))


@dataclass(frozen=True)
class BaseMap:
    """
    A morphism (f, ε): source -> target. f lists the target position of every source position,
    eps holds the status of every target position.
    """
    source: CanonicalObject
    target: CanonicalObject
    f: Tuple[int, ...]
    eps: Tuple[Status, ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        object.__setattr__(self, "eps", tuple(self.eps))

    @staticmethod
    def identity(obj: CanonicalObject):
        return BaseMap(obj, obj, tuple(range(1, len(obj) + 1)), (Status.EXECUTING,) * len(obj))

    @staticmethod
    def parse(text: str, source: CanonicalObject, target: CanonicalObject):
        match = re.fullmatch(r'\s*f\s*=\s*\[([^\]]*)\]\s*;\s*eps\s*=\s*"([01*]*)"\s*', text)
        if match is None:
            raise FormatError("invalid base map " + repr(text))
        try:
            f = tuple(int(part) for part in match.group(1).split(",") if len(part.strip()) > 0)
        except ValueError:
            raise FormatError("invalid base map images " + repr(match.group(1)))
        return BaseMap(source, target, f, tuple(Status(char) for char in match.group(2)))

    def violations(self, mode: MapMode = MapMode.CONCSET) -> List[str]:
        violations = []
        m, n = len(self.source), len(self.target)
        if len(self.f) != m:
            violations.append("f has " + str(len(self.f)) + " images for a source of arity " + str(m))
        if len(self.eps) != n:
            violations.append("eps has " + str(len(self.eps)) + " entries for a target of arity " + str(n))
        if len(violations) > 0:
            return violations

        in_range = [image for image in self.f if 1 <= image <= n]
        if len(in_range) != m:
            violations.append("f maps outside 1.." + str(n))
        if len(set(self.f)) != m:
            violations.append("f is not injective")
        for j, image in enumerate(self.f, 1):
            if 1 <= image <= n and self.source.label(j) != self.target.label(image):
                violations.append("f does not preserve the label of position " + str(j))
        executing = {u for u in range(1, n + 1) if self.eps[u - 1] == Status.EXECUTING}
        if executing != set(self.f):
            violations.append("eps marks " + str(sorted(executing)) + " as executing but the image of f is " + str(sorted(set(self.f))))
        if mode == MapMode.CONCLIST and any(a >= b for a, b in zip(self.f, self.f[1:])):
            violations.append("f is not order preserving")
        return violations

    def is_valid(self, mode: MapMode = MapMode.CONCSET) -> bool:
        return len(self.violations(mode)) == 0

    def __str__(self):
        return "f=[" + ",".join(str(image) for image in self.f) + "]; eps=\"" + "".join(status.value for status in self.eps) + "\""


def validate_base_map(m: BaseMap, mode: MapMode = MapMode.CONCSET) -> List[str]:
    return m.violations(mode)


def compose_base_maps(g: BaseMap, f: BaseMap) -> BaseMap:
    """(g, ζ) ∘ (f, ε): statuses of target events hit by g come from ε, the rest keep ζ."""
    if f.target != g.source:
        raise ObjectMismatch("cannot compose: " + str(f.target) + " is not " + str(g.source))
    eta = list(g.eps)
    for t, image in enumerate(g.f, 1):
        eta[image - 1] = f.eps[t - 1]
    return BaseMap(f.source, g.target, tuple(g.f[t - 1] for t in f.f), tuple(eta))


def coface_map(target: CanonicalObject, i: int, k: int) -> BaseMap:
    """F(d^k_i) into the given target: (ι_i, ε^k_i)."""
    if not 1 <= i <= len(target):
        raise IndexOutOfRange("coface index " + str(i) + " outside 1.." + str(len(target)))
    eps = [Status.EXECUTING] * len(target)
    eps[i - 1] = Status.of_polarity(k)
    return BaseMap(target.remove(i), target, insertion_map(i, len(target)), tuple(eps))


def permutation_map(source: CanonicalObject, theta: Permutation) -> BaseMap:
    """F(θ) = (θ, const *): source -> source permuted by θ."""
    return BaseMap(source, source.permuted(theta), theta.images, (Status.EXECUTING,) * len(source))


@dataclass(frozen=True)
class Coface:
    index: int
    polarity: int

    def __str__(self):
        return "d" + str(self.polarity) + "_" + str(self.index)


Generator = Union[Coface, Permutation]


@dataclass(frozen=True)
class CanonicalMorphism:
    """
    d^{k_r}_{i_r} ∘ .. ∘ d^{k_1}_{i_1} ∘ τ with i_1 < .. < i_r. Labels are carried by the target;
    the source is derived from it.
    """
    tau: Permutation
    cofaces: Tuple[Tuple[int, int], ...]
    target: CanonicalObject

    def __post_init__(self):
        object.__setattr__(self, "cofaces", tuple((int(i), int(k)) for i, k in self.cofaces))
        if self.tau.arity + len(self.cofaces) != len(self.target):
            raise ArityMismatch("permutation on " + str(self.tau.arity) + " letters and " + str(len(self.cofaces)) +
                                " cofaces do not reach arity " + str(len(self.target)))
        indices = [i for i, _ in self.cofaces]
        if any(a >= b for a, b in zip(indices, indices[1:])):
            raise InvalidMap("coface indices " + str(indices) + " are not strictly increasing")
        if len(indices) > 0 and (indices[0] < 1 or indices[-1] > len(self.target)):
            raise InvalidMap("coface indices " + str(indices) + " outside 1.." + str(len(self.target)))
        if any(k not in (0, 1) for _, k in self.cofaces):
            raise InvalidMap("coface polarities must be 0 or 1")

    @staticmethod
    def parse(text: str, target: CanonicalObject):
        match = re.fullmatch(r"\s*tau\s*=\s*(\[[^\]]*\])\s*;\s*d\s*=\s*\[(.*)\]\s*", text)
        if match is None:
            raise FormatError("invalid canonical morphism " + repr(text))
        cofaces = [(int(i), int(k)) for i, k in re.findall(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", match.group(2))]
        return CanonicalMorphism(Permutation.parse(match.group(1)), tuple(cofaces), target)

    def objects(self) -> List[CanonicalObject]:
        """The intermediate objects O_0 .. O_r, O_s being the target of the s-th coface."""
        objects = [self.target]
        for i, _ in reversed(self.cofaces):
            objects.insert(0, objects[0].remove(i))
        return objects

    @property
    def source(self) -> CanonicalObject:
        below = self.objects()[0]
        return CanonicalObject(tuple(below.label(self.tau(j)) for j in range(1, self.tau.arity + 1)))

    def __str__(self):
        return "tau=" + str(self.tau) + "; d=[" + ",".join("(" + str(i) + "," + str(k) + ")" for i, k in self.cofaces) + "]"


def eval_F(m: CanonicalMorphism) -> BaseMap:
    objects = m.objects()
    result = permutation_map(m.source, m.tau)
    for s, (i, k) in enumerate(m.cofaces, 1):
        result = compose_base_maps(coface_map(objects[s], i, k), result)
    return result


def invert_F(m: BaseMap) -> CanonicalMorphism:
    violations = m.violations(MapMode.CONCSET)
    if len(violations) > 0:
        raise InvalidMap(", ".join(violations))
    cofaces = tuple((u, status.polarity) for u, status in enumerate(m.eps, 1) if status != Status.EXECUTING)
    rank = {image: r for r, image in enumerate(sorted(m.f), 1)}
    return CanonicalMorphism(Permutation(tuple(rank[image] for image in m.f)), cofaces, m.target)


def normalize(word: Sequence[Generator], target: CanonicalObject) -> CanonicalMorphism:
    """
    Rewrites the composite word[0] ∘ word[1] ∘ .. into canonical form. Permutations are absorbed
    into the trailing permutation; a coface is first moved left of it by the permutation-face
    interchange and then sorted into the coface block with the cubical identities.
    """
    sigma = Permutation.identity(len(target))
    block: List[Tuple[int, int]] = []
    for generator in word:
        arity = sigma.arity
        if isinstance(generator, Permutation):
            if generator.arity != arity:
                raise ArityMismatch("permutation " + str(generator) + " applied at arity " + str(arity))
            sigma = sigma * generator
        else:
            if not 1 <= generator.index <= arity:
                raise ArityMismatch("coface " + str(generator) + " applied at arity " + str(arity))
            if generator.polarity not in (0, 1):
                raise InvalidMap("coface polarity must be 0 or 1")
            j = sigma(generator.index)
            sigma = induced_face_permutation(sigma, j)
            t = 0
            while t < len(block) and block[t][0] <= j:
                j += 1
                t += 1
            block.insert(t, (j, generator.polarity))
    normal = CanonicalMorphism(sigma, tuple(block), target)
    logging.debug("normalized " + " ".join(str(generator) for generator in word) + " to " + str(normal))
    return normal


def eval_word(word: Sequence[Generator], target: CanonicalObject) -> BaseMap:
    """The composite word[0] ∘ word[1] ∘ .. of the generators' images under F, ending in target."""
    result: Optional[BaseMap] = None
    current = target
    for generator in word:
        if isinstance(generator, Permutation):
            if generator.arity != len(current):
                raise ArityMismatch("permutation " + str(generator) + " applied at arity " + str(len(current)))
            step = permutation_map(current.permuted(generator.inverse()), generator)
        else:
            if not 1 <= generator.index <= len(current):
                raise ArityMismatch("coface " + str(generator) + " applied at arity " + str(len(current)))
            step = coface_map(current, generator.index, generator.polarity)
        result = step if result is None else compose_base_maps(result, step)
        current = step.source
    return BaseMap.identity(target) if result is None else result


def enumerate_base_maps(source: CanonicalObject, target: CanonicalObject, mode: MapMode = MapMode.CONCSET) -> List[BaseMap]:
    maps = []
    m, n = len(source), len(target)
    for f in itertools.permutations(range(1, n + 1), m):
        if mode == MapMode.CONCLIST and list(f) != sorted(f):
            continue
        if any(source.label(j) != target.label(image) for j, image in enumerate(f, 1)):
            continue
        free = [u for u in range(1, n + 1) if u not in f]
        for statuses in itertools.product((Status.NOT_STARTED, Status.TERMINATED), repeat=len(free)):
            eps = [Status.EXECUTING] * n
            for u, status in zip(free, statuses):
                eps[u - 1] = status
            maps.append(BaseMap(source, target, f, tuple(eps)))
    return maps


def enumerate_canonical_morphisms(source: CanonicalObject, target: CanonicalObject) -> List[CanonicalMorphism]:
    morphisms = []
    m, n = len(source), len(target)
    if m > n:
        return morphisms
    for indices in itertools.combinations(range(1, n + 1), n - m):
        for polarities in itertools.product((0, 1), repeat=n - m):
            for tau in Permutation.all(m):
                candidate = CanonicalMorphism(tau, tuple(zip(indices, polarities)), target)
                if candidate.source == source:
                    morphisms.append(candidate)
    return morphisms


def conclist_isomorphisms(source: CanonicalObject, target: CanonicalObject) -> List[BaseMap]:
    if len(source) != len(target):
        return []
    return enumerate_base_maps(source, target, MapMode.CONCLIST)
