"""
Instance samplers for theorem campaigns.

Every sampler draws from a numpy Generator seeded per instance, so a campaign
is reproducible from its base seed alone.
"""
import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence

import numpy as np

from config.settings import CampaignConfig
from domain.models.module import FPModule
from domain.models.quotient_ring import QuotientRing
from domain.models.statement import Statement
from domain.services.homology_service import HomologyService
from domain.services.module_service import ModuleService, shift_components
from domain.services.oracle_service import OracleService
from domain.services.ring_service import RingService
from shared.exceptions import ValidationError

logger = logging.getLogger(__name__)

_FAMILY_KEYS = ("modules", "ideals")
# 可窮舉的取樣器；其餘種類只能抽樣
_CATALOG_KINDS = ("catalog_module", "catalog_pair", "catalog_ideal", "fixed")
_ENUMERATED_KINDS = ("first_syzygy", "finite_module", "finite_pair", "syzygy_pair", "summand_module")
# syzygy_pair 依實例序號輪流的 (M, N) 形狀；長度與環數互質時每個環都輪到每種形狀
_PAIR_SHAPES = (("X", "omega"), ("R", "free"), ("X", "R+omega"), ("R", "R+omega"), ("R+X", "free"))
# summand_module 的 R 直和項個數
_SUMMAND_COPIES = (0, 1, 2)


def _instance_params(statement: Statement) -> Dict[str, Any]:
    return {k: v for k, v in statement.params.items() if k not in _FAMILY_KEYS}


@dataclass
class Instance:
    """One input to a theorem predicate."""
    label: str
    ring: QuotientRing
    modules: Dict[str, FPModule] = field(default_factory=dict)
    params: Dict[str, Any] = field(default_factory=dict)
    seed: int = 0
    sampled: bool = False  # drawn from a budget-truncated enumeration

    def describe(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "ring": self.ring.describe(),
            "modules": {name: M.describe() for name, M in self.modules.items()},
            "params": dict(self.params),
        }


class InstanceSampler:
    """Builds random or exhaustive instances for a registered statement."""

    def __init__(
        self,
        rings: RingService,
        modules: ModuleService,
        homology: HomologyService,
        oracle: OracleService,
        config: CampaignConfig,
    ):
        self.rings = rings
        self.modules = modules
        self.homology = homology
        self.oracle = oracle
        self.config = config

    # ---- module families -------------------------------------------------

    def with_free_summand(self, M: FPModule) -> FPModule:
        """R ⊕ M, embedded in R ⊕ F when M carries an embedding into a free module F."""
        ring = M.ring
        zero = ring.ambient.zero_monomial
        if M.embedding is None:
            return self.modules.direct_sum([self.modules.ring_module(ring), M], f"R+{M.name or 'M'}")
        generators = [{(0, zero): 1}] + [shift_components(v, 1) for v in M.embedding.column_vectors()]
        twists = (0,) + tuple(M.embedding.target.twists)
        return self.modules.subquotient(ring, generators, [], twists, f"R+{M.name or 'M'}")

    def family(self, ring: QuotientRing) -> Dict[str, FPModule]:
        """Named modules available on every ring: R, k, m, R/(v) per variable, R+k, and ω when R is CM."""
        cached = ring.cache.get("module_family")
        if cached is not None:
            return cached
        R = self.modules.ring_module(ring)
        k = self.homology.residue_field(ring)
        members: Dict[str, FPModule] = {"R": R, "k": k, "m": self.modules.maximal_ideal(ring)}
        for name, var in zip(ring.names, ring.gens):
            members[f"R/({name})"] = self.modules.quotient_by_ideal(ring, [var], f"R/({name})")
        members["R+k"] = self.modules.direct_sum([R, k], "R+k")
        if self.homology.is_cohen_macaulay_ring(ring):
            members["omega"] = self.homology.canonical_module(ring)
        ring.cache["module_family"] = members
        return members

    def _family_choice(self, ring: QuotientRing, statement: Statement) -> Dict[str, FPModule]:
        members = self.family(ring)
        names = statement.param("modules")
        if not names:
            return members
        missing = [n for n in names if n not in members]
        if missing:
            raise ValidationError(f"模組家族中沒有 {', '.join(missing)}", "unknown_module")
        return {n: members[n] for n in names}

    def finite_module(
        self, ring: QuotientRing, rng: np.random.Generator, name: str = "M", max_dim: Optional[int] = None
    ) -> FPModule:
        X = self.oracle.random_module(ring, max_dim or self.config.max_dim, rng)
        return self.oracle.lin_to_fp(X, name)

    def first_syzygy(self, X: FPModule, name: str = "M") -> FPModule:
        M = self.modules.syzygy_module(X, 1)
        if self.modules.is_zero(M):
            M = self.modules.syzygy_module(self.homology.residue_field(X.ring), 1)
        M.name = name
        return M

    def free_plus(self, X: FPModule, copies: int) -> FPModule:
        """R^copies ⊕ X"""
        if copies == 0:
            return X
        R = self.modules.ring_module(X.ring)
        prefix = "R" if copies == 1 else f"R^{copies}"
        return self.modules.direct_sum([R] * copies + [X], f"{prefix}+{X.name or 'X'}")

    def _pair_source(
        self, ring: QuotientRing, shape: str, rng: np.random.Generator, max_dim: Optional[int]
    ) -> FPModule:
        if shape == "R":
            return self.modules.ring_module(ring)
        X = self.finite_module(ring, rng, "X", max_dim)
        return X if shape == "X" else self.free_plus(X, 1)

    def _pair_target(
        self, ring: QuotientRing, shape: str, rng: np.random.Generator, max_dim: Optional[int]
    ) -> FPModule:
        if shape == "free":
            rank = 1 + int(rng.integers(0, 2))
            return self.modules.free_module(ring, (0,) * rank, f"R^{rank}")
        N = self.first_syzygy(self.finite_module(ring, rng, "Y", max_dim), "Ω(Y)")
        return N if shape == "omega" else self.with_free_summand(N)

    def cyclic_module(self, ring: QuotientRing, rng: np.random.Generator) -> FPModule:
        """R/I with I generated by up to two random forms (possibly I = 0)."""
        count = int(rng.integers(0, 3))
        forms = []
        for _ in range(count):
            degree = int(rng.choice(ring.weights)) * int(rng.integers(1, 3))
            form = self.rings.random_form(ring, degree, rng)
            if not form.is_zero():
                forms.append(form)
        label = "R/(" + ", ".join(str(f) for f in forms) + ")" if forms else "R"
        M = self.modules.quotient_by_ideal(ring, forms, label)
        M.cache["ideal_generators"] = tuple(forms)
        return M

    # ---- sampling ---------------------------------------------------------

    def sample(
        self, statement: Statement, ring: QuotientRing, seed: int, index: int = 0, max_dim: Optional[int] = None
    ) -> Instance:
        rng = np.random.default_rng(seed)
        kind = statement.sampler
        label = f"{statement.id}#{index}@{ring.name or ring.describe()}"
        instance = Instance(label, ring, {}, _instance_params(statement), seed)

        if kind == "fixed":
            return instance
        if kind in ("first_syzygy", "syzygy_pair") and not ring.is_artinian:
            raise ValidationError(f"{kind} 取樣需要 Artinian 環", "not_artinian")
        if kind in ("finite_module", "finite_pair", "summand_module") and not ring.is_artinian:
            raise ValidationError(f"{kind} 取樣需要 Artinian 環", "not_artinian")

        if kind == "first_syzygy":
            M = self.first_syzygy(self.finite_module(ring, rng, "X", max_dim))
            if rng.random() < 1 / 3:
                M = self.with_free_summand(M)
            instance.modules["M"] = M
        elif kind == "finite_module":
            instance.modules["M"] = self.finite_module(ring, rng, "M", max_dim)
            instance.params.setdefault("r", self._rank_guess(instance.modules["M"], rng))
        elif kind == "finite_pair":
            M = self.finite_module(ring, rng, "M", max_dim) if rng.random() < 0.5 else self.cyclic_module(ring, rng)
            N = self.finite_module(ring, rng, "N", max_dim)
            instance.modules.update(M=M, N=N)
            instance.params.setdefault("r", self._rank_guess(M, rng))
            instance.params.setdefault("s", int(rng.integers(0, 3)))
        elif kind == "syzygy_pair":
            source, target = _PAIR_SHAPES[index % len(_PAIR_SHAPES)]
            M = self._pair_source(ring, source, rng, max_dim)
            N = self._pair_target(ring, target, rng, max_dim)
            instance.modules.update(M=M, N=N)
            instance.label += f":{source},{target}"
        elif kind == "summand_module":
            copies = _SUMMAND_COPIES[index % len(_SUMMAND_COPIES)]
            instance.modules["M"] = self.free_plus(self.finite_module(ring, rng, "X", max_dim), copies)
        elif kind == "catalog_module":
            members = self._family_choice(ring, statement)
            names = sorted(members)
            name = names[int(rng.integers(0, len(names)))]
            instance.modules["M"] = members[name]
            instance.label += f":{name}"
        elif kind == "catalog_pair":
            members = self._family_choice(ring, statement)
            names = sorted(members)
            a = names[int(rng.integers(0, len(names)))]
            b = names[int(rng.integers(0, len(names)))]
            instance.modules.update(M=members[a], N=members[b])
            instance.label += f":{a},{b}"
        elif kind == "catalog_ideal":
            ideals = self._ideal_choices(statement, ring)
            I = self.ideal_instance(ring, ideals[int(rng.integers(0, len(ideals)))])
            instance.modules["I"] = I
            instance.label += f":{I.name}"
        elif kind == "cyclic":
            instance.modules["M"] = self.cyclic_module(ring, rng)
        else:
            raise ValidationError(f"未知的取樣器 {kind}", "unknown_sampler")
        return instance

    @staticmethod
    def _ideal_choices(statement: Statement, ring: QuotientRing) -> List[List[str]]:
        """ideals 參數可以是清單，或以環名稱為鍵的字典"""
        ideals = statement.param("ideals", [])
        if isinstance(ideals, dict):
            ideals = ideals.get(ring.name, [])
        if not ideals:
            raise ValidationError("catalog_ideal 需要 ideals 參數", "missing_parameter")
        return ideals

    def ideal_instance(self, ring: QuotientRing, gens: Sequence[str]) -> FPModule:
        polys = [ring.parse(g) for g in gens]
        label = "(" + ", ".join(gens) + ")"
        I = self.modules.ideal_module(ring, polys, label)
        I.cache["ideal_generators"] = tuple(polys)
        return I

    @staticmethod
    def _rank_guess(M: FPModule, rng: np.random.Generator) -> int:
        """half the time the true μ(M), otherwise a random rank in 1..3"""
        if rng.random() < 0.5 and M.num_generators:
            return M.num_generators
        return int(rng.integers(1, 4))

    # ---- exhaustive ---------------------------------------------------------

    @staticmethod
    def is_enumerable(statement: Statement, ring: QuotientRing) -> bool:
        if statement.sampler in _CATALOG_KINDS:
            return True
        return statement.sampler in _ENUMERATED_KINDS and ring.is_artinian

    def exhaustive(
        self,
        statement: Statement,
        ring: QuotientRing,
        max_dim: Optional[int] = None,
        budget: Optional[int] = None,
    ) -> Iterator[Instance]:
        """Instances built from every enumerated module up to max_dim (fingerprint-deduplicated)."""
        max_dim = max_dim or self.config.max_dim
        kind = statement.sampler
        if kind == "catalog_module":
            for name, M in sorted(self._family_choice(ring, statement).items()):
                yield Instance(f"{statement.id}@{ring.name}:{name}", ring, {"M": M}, _instance_params(statement))
            return
        if kind == "catalog_pair":
            members = sorted(self._family_choice(ring, statement).items())
            for (a, M), (b, N) in product(members, repeat=2):
                yield Instance(f"{statement.id}@{ring.name}:{a},{b}", ring, {"M": M, "N": N}, _instance_params(statement))
            return
        if kind == "catalog_ideal":
            for gens in self._ideal_choices(statement, ring):
                I = self.ideal_instance(ring, gens)
                yield Instance(f"{statement.id}@{ring.name}:{I.name}", ring, {"I": I}, _instance_params(statement))
            return
        if kind == "fixed":
            yield Instance(f"{statement.id}@{ring.name}", ring, {}, _instance_params(statement))
            return
        if not ring.is_artinian:
            raise ValidationError("窮舉只支援 Artinian 環", "not_artinian")
        enumeration = self.oracle.enumerate_modules(ring, max_dim, budget)
        if enumeration.sampled:
            logger.warning("[Campaign] %s 的枚舉超出預算，改為抽樣", ring.name)
        for instance in self._enumerated(statement, ring, enumeration.modules, max_dim):
            instance.sampled = enumeration.sampled
            yield instance

    def _enumerated(
        self, statement: Statement, ring: QuotientRing, enumerated: Sequence, max_dim: int
    ) -> Iterator[Instance]:
        kind = statement.sampler
        fp = [self.oracle.lin_to_fp(X, X.label) for X in enumerated]
        params = _instance_params(statement)
        if kind == "first_syzygy":
            for X in fp:
                M = self.first_syzygy(X, f"Ω({X.name})")
                yield Instance(f"{statement.id}@{ring.name}:Ω({X.name})", ring, {"M": M}, dict(params))
                yield Instance(
                    f"{statement.id}@{ring.name}:R+Ω({X.name})", ring, {"M": self.with_free_summand(M)}, dict(params)
                )
        elif kind == "finite_module":
            ranks = range(1, max_dim + 1)
            for X, r in product(fp, ranks):
                yield Instance(f"{statement.id}@{ring.name}:{X.name},r={r}", ring, {"M": X}, dict(params, r=r))
        elif kind == "finite_pair":
            ranks = range(1, max_dim + 1)
            for X, Y, r in product(fp, fp, ranks):
                yield Instance(
                    f"{statement.id}@{ring.name}:{X.name},{Y.name},r={r}",
                    ring,
                    {"M": X, "N": Y},
                    dict(params, r=r, s=params.get("s", 1)),
                )
        elif kind == "syzygy_pair":
            R = self.modules.ring_module(ring)
            sources = [(X.name, X) for X in fp] + [("R", R)]
            targets = [("R", R)]
            for Y in fp:
                N = self.first_syzygy(Y, f"Ω({Y.name})")
                targets += [(N.name, N), (f"R+{N.name}", self.with_free_summand(N))]
            for (a, M), (b, N) in product(sources, targets):
                yield Instance(f"{statement.id}@{ring.name}:{a},{b}", ring, {"M": M, "N": N}, dict(params))
        elif kind == "summand_module":
            for X, copies in product(fp, _SUMMAND_COPIES[:2]):
                M = self.free_plus(X, copies)
                yield Instance(f"{statement.id}@{ring.name}:{M.name}", ring, {"M": M}, dict(params))
        else:
            raise ValidationError(f"取樣器 {kind} 不支援窮舉", "not_enumerable")
