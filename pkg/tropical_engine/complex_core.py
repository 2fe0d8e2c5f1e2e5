"""
Simplicial cone complexes with integral structure.

Every cone is simplicial and its lattice is, by convention, freely generated
by its rays, so a point of a cone is a vector of non-negative coordinates in
the ray basis and a piecewise linear function is a map ray -> slope plus a
constant. Dilations and other integral data live in morphism matrices.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from tropical_engine.errors import (
    DuplicateRay,
    InconsistentIntersection,
    InvalidCell,
    NonClosedUnderFaces,
    NonPrimitiveRay,
    NonSimplicial,
    NotInterior,
    OutsideDomain,
    StructurallyInvalid,
    UnknownCone,
    UnknownRay,
    DomainMismatch,
)

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction]

VERTEX_ID = "0"


@dataclass(frozen=True)
class Ray:
    id: str
    label: str = ""


@dataclass(frozen=True)
class Cone:
    id: str
    rays: Tuple[str, ...]
    aut_order: int = 1

    @property
    def dim(self) -> int:
        return len(self.rays)

    @property
    def ray_set(self) -> FrozenSet[str]:
        return frozenset(self.rays)


@dataclass(frozen=True)
class Cell:
    """The cell sigma/tau of the extended complex: directions of tau pushed to infinity inside sigma."""
    sigma: str
    tau: str


class ConeComplex:
    """An abstract simplicial cone complex.

    Build instances through build_complex(), which validates the incidence
    data. The complex is immutable; lookups are cached lazily.
    """

    def __init__(self, rays: Sequence[Ray], cones: Sequence[Cone]):
        self.rays: Tuple[Ray, ...] = tuple(rays)
        self.cones: Tuple[Cone, ...] = tuple(sorted(cones, key=lambda c: (c.dim, c.id)))
        self._ray_by_id: Dict[str, Ray] = {r.id: r for r in self.rays}
        self._ray_order: Dict[str, int] = {r.id: i for i, r in enumerate(self.rays)}
        self._cone_by_id: Dict[str, Cone] = {c.id: c for c in self.cones}
        self._cone_by_rays: Dict[FrozenSet[str], Cone] = {c.ray_set: c for c in self.cones}
        self.cone_ids: FrozenSet[str] = frozenset(self._cone_by_id)
        self.dim: int = max((c.dim for c in self.cones), default=0)
        self._cofacets: Dict[str, List[Tuple[str, str]]] = {c.id: [] for c in self.cones}
        self._facets: Dict[str, List[Tuple[str, str]]] = {c.id: [] for c in self.cones}
        for cone in self.cones:
            for ray in cone.rays:
                face = self._cone_by_rays.get(cone.ray_set - {ray})
                if face is not None:
                    self._facets[cone.id].append((face.id, ray))
                    self._cofacets[face.id].append((cone.id, ray))
        self._star_cache: Dict[str, Tuple[Cone, ...]] = {}
        self._star_rays_cache: Dict[str, Tuple[str, ...]] = {}

    # lookups

    @property
    def vertex(self) -> Cone:
        return self._cone_by_rays[frozenset()]

    def ray(self, ray_id: str) -> Ray:
        try:
            return self._ray_by_id[ray_id]
        except KeyError:
            raise UnknownRay(f"unknown ray '{ray_id}'")

    def has_ray(self, ray_id: str) -> bool:
        return ray_id in self._ray_by_id

    def cone(self, cone_id: str) -> Cone:
        try:
            return self._cone_by_id[cone_id]
        except KeyError:
            raise UnknownCone(f"unknown cone '{cone_id}'")

    def has_cone(self, cone_id: str) -> bool:
        return cone_id in self._cone_by_id

    def cone_with_rays(self, rays: Iterable[str]) -> Optional[Cone]:
        return self._cone_by_rays.get(frozenset(rays))

    def sort_rays(self, rays: Iterable[str]) -> Tuple[str, ...]:
        return tuple(sorted(rays, key=self._ray_order.__getitem__))

    def cones_of_dim(self, k: int) -> List[Cone]:
        return [c for c in self.cones if c.dim == k]

    def facets(self, cone_id: str) -> List[Tuple[str, str]]:
        """(facet id, removed ray) for every codimension-one face."""
        self.cone(cone_id)
        return list(self._facets[cone_id])

    def cofacets(self, cone_id: str) -> List[Tuple[str, str]]:
        """(cone id, extra ray) for every cone containing cone_id in codimension one."""
        self.cone(cone_id)
        return list(self._cofacets[cone_id])

    def faces(self, cone_id: str) -> List[Cone]:
        cone = self.cone(cone_id)
        return [c for c in self.cones if c.ray_set <= cone.ray_set]

    def maximal_cones(self) -> List[Cone]:
        return [c for c in self.cones if not self._cofacets[c.id]]

    def is_pure(self) -> bool:
        return all(c.dim == self.dim for c in self.maximal_cones())

    def star_cones(self, cone_id: str) -> Tuple[Cone, ...]:
        cached = self._star_cache.get(cone_id)
        if cached is None:
            self.cone(cone_id)
            # cones containing sigma are reached from it through cofacets
            found = {cone_id}
            frontier = [cone_id]
            while frontier:
                current = frontier.pop()
                for cofacet, _ in self._cofacets[current]:
                    if cofacet not in found:
                        found.add(cofacet)
                        frontier.append(cofacet)
            cached = tuple(sorted((self._cone_by_id[c] for c in found), key=lambda c: (c.dim, c.id)))
            self._star_cache[cone_id] = cached
        return cached

    def star_rays(self, cone_id: str) -> Tuple[str, ...]:
        """Rays of all cones in the open star, in the complex's ray order."""
        cached = self._star_rays_cache.get(cone_id)
        if cached is None:
            rays = set()
            for c in self.star_cones(cone_id):
                rays.update(c.rays)
            cached = self.sort_rays(rays)
            self._star_rays_cache[cone_id] = cached
        return cached

    def __repr__(self) -> str:
        counts = [len(self.cones_of_dim(k)) for k in range(self.dim + 1)]
        return f"ConeComplex(rays={len(self.rays)}, cones_by_dim={counts})"


def _as_ray(item: Union[Ray, str, Tuple[str, str], Mapping[str, str]]) -> Ray:
    if isinstance(item, Ray):
        return item
    if isinstance(item, str):
        return Ray(item)
    if isinstance(item, Mapping):
        return Ray(str(item["id"]), str(item.get("label", "")))
    ray_id, label = item
    return Ray(str(ray_id), str(label))


def _as_cone(item: Union[Cone, Tuple[str, Sequence[str]], Mapping[str, object]]) -> Cone:
    if isinstance(item, Cone):
        return item
    if isinstance(item, Mapping):
        return Cone(str(item["id"]), tuple(item["rays"]), int(item.get("aut", 1)))
    cone_id, rays = item
    return Cone(str(cone_id), tuple(rays))


def build_complex(rays: Iterable[Union[Ray, str, Tuple[str, str]]],
                  cones: Iterable[Union[Cone, Tuple[str, Sequence[str]]]],
                  aut_orders: Optional[Mapping[str, int]] = None) -> ConeComplex:
    """Validate raw incidence data and build a ConeComplex.

    The vertex cone is added with id "0" when absent. Every other face must be
    listed explicitly.

    Raises:
        DuplicateRay, NonClosedUnderFaces, InconsistentIntersection, NonSimplicial, UnknownRay
    """
    ray_list = [_as_ray(r) for r in rays]
    seen = set()
    for ray in ray_list:
        if ray.id in seen:
            logger.error(f"duplicate ray id '{ray.id}'")
            raise DuplicateRay(f"duplicate ray id '{ray.id}'")
        seen.add(ray.id)

    aut_orders = dict(aut_orders or {})
    cone_list: List[Cone] = []
    cone_ids = set()
    by_rays: Dict[FrozenSet[str], str] = {}
    for raw in cones:
        cone = _as_cone(raw)
        if cone.id in aut_orders:
            cone = Cone(cone.id, cone.rays, int(aut_orders.pop(cone.id)))
        if cone.aut_order < 1:
            raise InconsistentIntersection(f"cone '{cone.id}' has non-positive aut order {cone.aut_order}")
        if len(set(cone.rays)) != len(cone.rays):
            raise NonSimplicial(f"cone '{cone.id}' repeats a ray: {cone.rays}")
        for ray_id in cone.rays:
            if ray_id not in seen:
                raise UnknownRay(f"cone '{cone.id}' uses unknown ray '{ray_id}'")
        if cone.id in cone_ids:
            raise InconsistentIntersection(f"duplicate cone id '{cone.id}'")
        if cone.ray_set in by_rays:
            logger.error(f"cones '{by_rays[cone.ray_set]}' and '{cone.id}' share the ray set {sorted(cone.ray_set)}")
            raise InconsistentIntersection(
                f"cones '{by_rays[cone.ray_set]}' and '{cone.id}' have the same rays")
        cone_ids.add(cone.id)
        by_rays[cone.ray_set] = cone.id
        cone_list.append(cone)
    if aut_orders:
        raise UnknownCone(f"aut orders given for unknown cones: {sorted(aut_orders)}")

    if frozenset() not in by_rays:
        if VERTEX_ID in cone_ids:
            raise InconsistentIntersection(f"cone id '{VERTEX_ID}' is reserved for the vertex")
        cone_list.append(Cone(VERTEX_ID, ()))
        by_rays[frozenset()] = VERTEX_ID

    # codimension-one faces suffice: closure follows by induction on dimension
    for cone in cone_list:
        for ray_id in cone.rays:
            face = cone.ray_set - {ray_id}
            if face not in by_rays:
                logger.error(f"cone '{cone.id}' is missing its face {sorted(face)}")
                raise NonClosedUnderFaces(f"cone '{cone.id}' has no face with rays {sorted(face)}")

    complex_ = ConeComplex(ray_list, cone_list)
    logger.debug(f"built {complex_!r}")
    return complex_


def star(complex_: ConeComplex, cone_id: str) -> Tuple[Cone, ...]:
    """Open star of a cone: all cones containing it."""
    return complex_.star_cones(cone_id)


# piecewise linear functions

def _fraction_map(values: Mapping[str, RationalLike]) -> Dict[str, Fraction]:
    out = {}
    for ray_id, value in values.items():
        q = Fraction(value)
        if q:
            out[ray_id] = q
    return out


@dataclass(frozen=True, eq=True)
class PLFunction:
    """Piecewise linear function: slopes on ray generators plus a constant, on a set of cones."""
    ray_values: Mapping[str, Fraction]
    constant: Fraction = Fraction(0)
    domain: FrozenSet[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "ray_values", _fraction_map(self.ray_values))
        object.__setattr__(self, "constant", Fraction(self.constant))
        object.__setattr__(self, "domain", frozenset(self.domain))

    __hash__ = None  # type: ignore[assignment]

    def slope(self, ray_id: str) -> Fraction:
        return self.ray_values.get(ray_id, Fraction(0))

    @property
    def is_strict(self) -> bool:
        return all(v.denominator == 1 for v in self.ray_values.values())

    def is_constant_on(self, cone: Cone) -> bool:
        return all(not self.slope(r) for r in cone.rays)

    def slopes(self, rays: Sequence[str]) -> List[Fraction]:
        return [self.slope(r) for r in rays]

    def integer_slopes(self, rays: Sequence[str]) -> List[int]:
        out = []
        for r in rays:
            s = self.slope(r)
            if s.denominator != 1:
                raise DomainMismatch(f"slope {s} on ray '{r}' is not integral")
            out.append(int(s))
        return out

    def denominator(self) -> int:
        d = 1
        for v in self.ray_values.values():
            d = d * v.denominator // gcd(d, v.denominator)
        return d

    def restrict(self, domain: Iterable[str], rays: Optional[Iterable[str]] = None) -> "PLFunction":
        domain = frozenset(domain)
        if rays is None:
            values = dict(self.ray_values)
        else:
            keep = set(rays)
            values = {r: v for r, v in self.ray_values.items() if r in keep}
        return PLFunction(values, self.constant, domain)

    def scale(self, factor: RationalLike) -> "PLFunction":
        factor = Fraction(factor)
        return PLFunction({r: v * factor for r, v in self.ray_values.items()}, self.constant * factor, self.domain)

    def shift(self, amount: RationalLike) -> "PLFunction":
        return PLFunction(self.ray_values, self.constant + Fraction(amount), self.domain)

    def __add__(self, other: "PLFunction") -> "PLFunction":
        values = dict(self.ray_values)
        for r, v in other.ray_values.items():
            values[r] = values.get(r, Fraction(0)) + v
        return PLFunction(values, self.constant + other.constant, self.domain & other.domain)

    def __neg__(self) -> "PLFunction":
        return self.scale(-1)

    def __sub__(self, other: "PLFunction") -> "PLFunction":
        return self + (-other)


def global_function(complex_: ConeComplex, values: Mapping[str, RationalLike], constant: RationalLike = 0) -> PLFunction:
    """PL function on the whole complex with the given ray slopes."""
    for ray_id in values:
        complex_.ray(ray_id)
    return PLFunction(dict(values), Fraction(constant), complex_.cone_ids)


def constant_function(complex_: ConeComplex, constant: RationalLike = 0,
                      domain: Optional[Iterable[str]] = None) -> PLFunction:
    return PLFunction({}, Fraction(constant), complex_.cone_ids if domain is None else frozenset(domain))


def ray_function(complex_: ConeComplex, ray_id: str, slope: int = -1) -> PLFunction:
    """Function with the given slope on one ray and zero elsewhere.

    The default slope -1 makes the associated divisor the ray itself with
    multiplicity +1.
    """
    complex_.ray(ray_id)
    return PLFunction({ray_id: slope}, Fraction(0), complex_.cone_ids)


def evaluate(phi: PLFunction, complex_: ConeComplex, cone_id: str, coords: Sequence[RationalLike]) -> Fraction:
    """Value of phi at the point sum_i coords[i] * u_{rays[i]} of the given cone."""
    cone = complex_.cone(cone_id)
    if cone_id not in phi.domain:
        raise OutsideDomain(f"cone '{cone_id}' is not in the function's domain")
    if len(coords) != cone.dim:
        raise OutsideDomain(f"cone '{cone_id}' has dimension {cone.dim}, got {len(coords)} coordinates")
    coords = [Fraction(x) for x in coords]
    if any(x < 0 for x in coords):
        raise OutsideDomain(f"negative coordinate in {coords}")
    return phi.constant + sum((phi.slope(r) * x for r, x in zip(cone.rays, coords)), Fraction(0))


# cells of the extended complex

def make_cell(complex_: ConeComplex, sigma: str, tau: str) -> Cell:
    try:
        s, t = complex_.cone(sigma), complex_.cone(tau)
    except UnknownCone as e:
        raise InvalidCell(str(e))
    if not t.ray_set <= s.ray_set:
        raise InvalidCell(f"'{tau}' is not a face of '{sigma}'")
    return Cell(sigma, tau)


def cells(complex_: ConeComplex, interior_only: bool = False) -> List[Cell]:
    """All cells sigma/tau, or only the finite ones sigma/0 when interior_only is set."""
    out = []
    vertex = complex_.vertex.id
    for sigma in complex_.cones:
        if interior_only:
            out.append(Cell(sigma.id, vertex))
            continue
        for tau in complex_.faces(sigma.id):
            out.append(Cell(sigma.id, tau.id))
    return out


# morphisms

RayImage = Mapping[str, int]


@dataclass(frozen=True)
class ComplexMorphism:
    """Cone-to-cone map, linear on each cone in the ray bases.

    `ray_images` sends each source ray to a non-negative integer combination
    of target rays. `face_images` optionally overrides the images on a single
    cone; it records maps into targets whose cones are glued to themselves by
    a fold, where an image is only determined cone by cone.
    """
    source: ConeComplex
    target: ConeComplex
    cone_map: Mapping[str, str]
    ray_images: Mapping[str, RayImage]
    face_images: Mapping[str, Mapping[str, RayImage]] = field(default_factory=dict)
    certified_linear: bool = False
    name: str = ""

    __hash__ = None  # type: ignore[assignment]

    def image_of_ray(self, ray_id: str) -> Dict[str, int]:
        return {t: int(c) for t, c in self.ray_images.get(ray_id, {}).items() if c}

    def images_on(self, cone_id: str) -> Dict[str, Dict[str, int]]:
        """Images of the cone's rays, honouring cone-local overrides."""
        cone = self.source.cone(cone_id)
        local = self.face_images.get(cone_id, {})
        out = {}
        for r in cone.rays:
            image = local[r] if r in local else self.ray_images.get(r, {})
            out[r] = {t: int(c) for t, c in image.items() if c}
        return out

    def image_matrix(self, cone_id: str, target_cone_id: Optional[str] = None) -> List[List[int]]:
        """Matrix whose columns are the images of the cone's rays in the target cone's ray basis."""
        cone = self.source.cone(cone_id)
        target = self.target.cone(target_cone_id or self.cone_map[cone_id])
        images = self.images_on(cone_id)
        return [[images[r].get(t, 0) for r in cone.rays] for t in target.rays]

    def validate(self) -> None:
        """Check the structural conditions; raise StructurallyInvalid on the first failure."""
        for cone in self.source.cones:
            target_id = self.cone_map.get(cone.id)
            if target_id is None or not self.target.has_cone(target_id):
                raise StructurallyInvalid(f"cone '{cone.id}' has no valid image (got {target_id!r})")
            target = self.target.cone(target_id)
            for ray_id, image in self.images_on(cone.id).items():
                for t, c in image.items():
                    if t not in target.ray_set:
                        raise StructurallyInvalid(
                            f"image of ray '{ray_id}' on cone '{cone.id}' leaves target cone '{target_id}'")
                    if c < 0:
                        raise StructurallyInvalid(f"negative coefficient in the image of ray '{ray_id}'")
            for face_id, _ in self.source.facets(cone.id):
                face_target = self.target.cone(self.cone_map[face_id])
                if not face_target.ray_set <= target.ray_set:
                    raise StructurallyInvalid(f"cone map does not respect the face '{face_id}' of '{cone.id}'")
        for ray in self.source.rays:
            if ray.id not in self.ray_images:
                raise StructurallyInvalid(f"ray '{ray.id}' has no image")


def pullback(morphism: ComplexMorphism, phi: PLFunction) -> PLFunction:
    """Compose phi with the morphism: slopes are pushed through the ray images.

    The result lives on the source cones whose image cone lies in phi's domain.
    """
    domain = frozenset(c.id for c in morphism.source.cones if morphism.cone_map.get(c.id) in phi.domain)
    if not domain:
        raise DomainMismatch("no source cone maps into the function's domain")
    rays_in_domain = set()
    for cone_id in domain:
        rays_in_domain.update(morphism.source.cone(cone_id).rays)
    values: Dict[str, Fraction] = {}
    for ray_id in rays_in_domain:
        total = sum((c * phi.slope(t) for t, c in morphism.image_of_ray(ray_id).items()), Fraction(0))
        if total:
            values[ray_id] = total
    return PLFunction(values, phi.constant, domain)


def identity_morphism(complex_: ConeComplex) -> ComplexMorphism:
    return ComplexMorphism(
        source=complex_,
        target=complex_,
        cone_map={c.id: c.id for c in complex_.cones},
        ray_images={r.id: {r.id: 1} for r in complex_.rays},
        certified_linear=True,
        name="identity",
    )


def compose(second: ComplexMorphism, first: ComplexMorphism) -> ComplexMorphism:
    """The morphism `second` after `first`."""
    if first.target is not second.source:
        raise StructurallyInvalid("morphisms are not composable: target and source differ")

    def push(image: Mapping[str, int], through: Mapping[str, RayImage]) -> Dict[str, int]:
        out: Dict[str, int] = {}
        for mid, c in image.items():
            for t, d in through.get(mid, {}).items():
                out[t] = out.get(t, 0) + c * d
        return {t: v for t, v in out.items() if v}

    ray_images = {r.id: push(first.image_of_ray(r.id), second.ray_images) for r in first.source.rays}
    face_images = {}
    if second.face_images or first.face_images:
        for cone in first.source.cones:
            if not cone.rays:
                continue
            middle = first.cone_map[cone.id]
            through = second.images_on(middle)
            face_images[cone.id] = {r: push(img, through) for r, img in first.images_on(cone.id).items()}
    return ComplexMorphism(
        source=first.source,
        target=second.target,
        cone_map={c.id: second.cone_map[first.cone_map[c.id]] for c in first.source.cones},
        ray_images=ray_images,
        face_images=face_images,
        certified_linear=first.certified_linear and second.certified_linear,
        name=f"{second.name}*{first.name}" if first.name or second.name else "",
    )


# star quotients

@dataclass(frozen=True)
class StarProjection:
    """Identification of the open star of tau, modulo tau, with a complex of its own."""
    original: ConeComplex
    quotient: ConeComplex
    tau: str
    cone_map: Mapping[str, str]  # quotient cone id -> original cone id

    __hash__ = None  # type: ignore[assignment]

    def project(self, phi: PLFunction) -> PLFunction:
        """Transport a function vanishing on tau to the quotient."""
        tau = self.original.cone(self.tau)
        if not phi.is_constant_on(tau):
            raise DomainMismatch(f"function is not constant on '{self.tau}'")
        missing = [q for q, o in self.cone_map.items() if o not in phi.domain]
        if missing:
            raise DomainMismatch(f"function is undefined on star cones {sorted(self.cone_map[q] for q in missing)}")
        rays = {r.id for r in self.quotient.rays}
        return PLFunction({r: v for r, v in phi.ray_values.items() if r in rays}, phi.constant,
                          self.quotient.cone_ids)


def star_quotient(complex_: ConeComplex, tau_id: str) -> Tuple[ConeComplex, StarProjection]:
    """Quotient of the star of tau by tau.

    Quotient rays are the rays completing tau to a cone of one dimension more;
    quotient cones keep the ids of the star cones they come from, the vertex
    keeps tau's id.
    """
    tau = complex_.cone(tau_id)
    star_cones = complex_.star_cones(tau_id)
    ray_ids = [extra for _, extra in complex_.cofacets(tau_id)]
    rays = [complex_.ray(r) for r in complex_.sort_rays(ray_ids)]
    cones = []
    cone_map = {}
    for cone in star_cones:
        rest = tuple(r for r in cone.rays if r not in tau.ray_set)
        cones.append(Cone(cone.id, rest, cone.aut_order))
        cone_map[cone.id] = cone.id
    quotient = build_complex(rays, cones)
    logger.debug(f"star quotient at '{tau_id}': {quotient!r}")
    return quotient, StarProjection(complex_, quotient, tau_id, cone_map)


# stellar subdivision

def _aligned_coords(cone: Cone, coords: Union[Mapping[str, int], Sequence[int]]) -> Tuple[int, ...]:
    if isinstance(coords, Mapping):
        unknown = set(coords) - cone.ray_set
        if unknown:
            raise NotInterior(f"coordinates name rays outside '{cone.id}': {sorted(unknown)}")
        values = [coords.get(r, 0) for r in cone.rays]
    else:
        values = list(coords)
        if len(values) != cone.dim:
            raise NotInterior(f"cone '{cone.id}' has dimension {cone.dim}, got {len(values)} coordinates")
    out = []
    for v in values:
        q = Fraction(v)
        if q.denominator != 1:
            raise NonPrimitiveRay(f"coordinates must be integers, got {q}")
        out.append(int(q))
    return tuple(out)


def stellar_subdivide(complex_: ConeComplex, cone_id: str,
                      interior_ray_coords: Union[Mapping[str, int], Sequence[int]],
                      new_ray_id: Optional[str] = None,
                      label: str = "",
                      aut_order: Optional[int] = None) -> Tuple[ConeComplex, ComplexMorphism]:
    """Insert a ray through the interior of a cone.

    Returns the refined complex and the identity-on-support morphism from the
    refined complex back to the original.

    Raises:
        NotInterior: the cone is the vertex, a coordinate is zero, or the cone
            is a ray and the coordinates are not [1]
        NonPrimitiveRay: coordinates are not coprime positive integers
    """
    sigma = complex_.cone(cone_id)
    if sigma.dim == 0:
        raise NotInterior("the vertex has no interior ray")
    coords = _aligned_coords(sigma, interior_ray_coords)
    if sigma.dim == 1:
        if coords != (1,):
            raise NotInterior(f"a ray has no interior point other than its generator, got {coords}")
        logger.info(f"subdividing ray '{cone_id}' at its own generator leaves the complex unchanged")
        return complex_, identity_morphism(complex_)
    if any(c < 0 for c in coords):
        raise NonPrimitiveRay(f"coordinates must be positive, got {coords}")
    if any(c == 0 for c in coords):
        raise NotInterior(f"coordinates {coords} lie on a proper face of '{cone_id}'")
    g = 0
    for c in coords:
        g = gcd(g, c)
    if g != 1:
        raise NonPrimitiveRay(f"coordinates {coords} are not primitive")

    new_id = new_ray_id or f"{cone_id}*"
    if complex_.has_ray(new_id):
        raise DuplicateRay(f"ray id '{new_id}' already exists")

    kept = [c for c in complex_.cones if not sigma.ray_set <= c.ray_set]
    new_cones: List[Cone] = []
    cone_map: Dict[str, str] = {c.id: c.id for c in kept}
    for gamma in kept:
        joined = complex_.cone_with_rays(gamma.ray_set | sigma.ray_set)
        if joined is None:
            continue
        if gamma.dim == 0:
            cone = Cone(new_id, (new_id,), aut_order if aut_order is not None else sigma.aut_order)
        else:
            cone = Cone(f"{gamma.id}+{new_id}", gamma.rays + (new_id,), joined.aut_order)
        new_cones.append(cone)
        cone_map[cone.id] = joined.id

    rays = list(complex_.rays) + [Ray(new_id, label)]
    refined = build_complex(rays, kept + new_cones)
    ray_images = {r.id: {r.id: 1} for r in complex_.rays}
    ray_images[new_id] = {r: c for r, c in zip(sigma.rays, coords)}
    morphism = ComplexMorphism(
        source=refined,
        target=complex_,
        cone_map=cone_map,
        ray_images=ray_images,
        name=f"subdivide({cone_id})",
    )
    logger.debug(f"stellar subdivision of '{cone_id}' at {coords}: {refined!r}")
    return refined, morphism

