# Copyright (C) 2026 swamp Development Team.
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


"""Scenario files: one planning problem per JSON document.

A scenario names its regions, the task automaton (a builder invocation, an
inline automaton or a file reference), an STL formula used to report
robustness, the dynamics and the planner settings. The document schema is a
tree of pydantic models. load_scenario validates the whole document in one
pass and reports every problem at once, each under the JSON pointer of the
offending value. Region names and guard texts are resolved against the
scenario's regions, which reach the validators through the validation
context.
"""

import copy
import hashlib
import json
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import (
    AfterValidator,
    BaseModel,
    ConfigDict,
    Discriminator,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    Tag,
    ValidationError,
    ValidationInfo,
    field_validator,
    model_validator,
)

from swamp.automaton import automaton as au
from swamp.automaton import builders
from swamp.core import settings
from swamp.core.algebra.semiring import SemiringTag
from swamp.core.errors import ScenarioValidationError, SwampError
from swamp.dynamics import DEFAULT_LEAD_PROFILE, BoundsMode, DynamicsModel, ModelKind
from swamp.planner.config import Engine, LrSchedule, PlannerConfig, Solver
from swamp.spec import predicate as pr
from swamp.spec.parser import parse_formula, parse_predicate
from swamp import stl


class Mode(str, Enum):
    open_loop = "open_loop"
    mpc = "mpc"


# Union members of the automaton section; pydantic puts the tag in error locations.
_AUTOMATON_TAGS = ("builder_call", "file_ref", "inline")


def _regions_in(info: ValidationInfo, key: str = "regions") -> Dict[str, pr.Region]:
    return (info.context or {}).get(key, {})


def _known_region(name: str, info: ValidationInfo) -> str:
    if name not in _regions_in(info):
        raise ValueError("unknown region %r" % (name,))
    return name


def _parsable_guard(text: str, info: ValidationInfo) -> str:
    parse_predicate(text, _regions_in(info, "guard_regions"))
    return text


def _parsable_formula(text: str, info: ValidationInfo) -> str:
    parse_formula(text, _regions_in(info))
    return text


RegionName = Annotated[str, AfterValidator(_known_region)]
GuardText = Annotated[str, AfterValidator(_parsable_guard)]
FormulaText = Annotated[str, AfterValidator(_parsable_formula)]


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class RegionSpec(_Section):
    kind: Literal["box", "ball"]
    lo: Optional[List[float]] = None
    hi: Optional[List[float]] = None
    center: Optional[List[float]] = None
    radius: Optional[NonNegativeFloat] = None
    proj: Optional[List[NonNegativeInt]] = None

    @model_validator(mode="after")
    def _check_shape(self) -> "RegionSpec":
        if self.kind == "box":
            if self.lo is None or self.hi is None:
                raise ValueError("a box needs lo and hi")
            if len(self.lo) != len(self.hi) or any(l > h for l, h in zip(self.lo, self.hi)):
                raise ValueError("lo and hi must have equal length with lo <= hi")
        elif self.center is None or self.radius is None:
            raise ValueError("a ball needs center and radius")
        if self.proj is not None and len(self.proj) != self.size:
            raise ValueError("proj needs %d state indices, got %d" % (self.size, len(self.proj)))
        return self

    @property
    def size(self) -> int:
        return len(self.lo) if self.kind == "box" else len(self.center)

    def to_region(self, name: str) -> pr.Region:
        return pr.Region.from_meta(name, self.model_dump(exclude_none=True))


def region_table(raw) -> Dict[str, pr.Region]:
    """The valid entries of a raw region object; invalid ones are skipped."""
    table: Dict[str, pr.Region] = {}
    if not isinstance(raw, dict):
        return table
    for name, d in raw.items():
        try:
            table[name] = RegionSpec.model_validate(d).to_region(name)
        except ValidationError:
            continue
    return table


class DynamicsSpec(_Section):
    kind: ModelKind
    dt: Optional[PositiveFloat] = None
    x0: List[float]
    control_bounds: Optional[List[Tuple[float, float]]] = None
    bounds_mode: BoundsMode = BoundsMode.project
    lead_profile: Optional[List[Tuple[float, float]]] = Field(default=None, min_length=1)

    @field_validator("x0")
    @classmethod
    def _x0_fits_model(cls, x0: List[float], info: ValidationInfo) -> List[float]:
        kind = info.data.get("kind")
        if kind is not None and len(x0) != DynamicsModel(kind).state_dim:
            raise ValueError(
                "expected %d numbers, got %d" % (DynamicsModel(kind).state_dim, len(x0))
            )
        return x0

    @model_validator(mode="after")
    def _check_model(self) -> "DynamicsSpec":
        self.to_model()
        return self

    def to_model(self) -> DynamicsModel:
        return DynamicsModel(
            self.kind,
            dt=self.dt,
            control_bounds=self.control_bounds,
            bounds_mode=self.bounds_mode,
        )

    def profile(self) -> Optional[Tuple[Tuple[float, float], ...]]:
        if self.kind is not ModelKind.acc:
            return None
        if self.lead_profile is None:
            return DEFAULT_LEAD_PROFILE
        return tuple((float(t0), float(v)) for t0, v in self.lead_profile)


class BuilderSpec(_Section):
    builder: Literal["sequence_visit", "any_order_visit", "bounded_response"]
    regions: List[RegionName] = []
    goals: List[RegionName] = []
    avoid: List[RegionName] = []
    dwell: Union[PositiveInt, List[PositiveInt]] = 1
    invariant: Optional[GuardText] = None
    trigger: Optional[GuardText] = None
    response: Optional[GuardText] = None
    within: Optional[NonNegativeInt] = None

    @model_validator(mode="after")
    def _check_arguments(self) -> "BuilderSpec":
        needs = {
            "sequence_visit": ("regions",),
            "any_order_visit": ("goals",),
            "bounded_response": ("invariant", "trigger", "response", "within"),
        }
        missing = [k for k in needs[self.builder] if getattr(self, k) in (None, [])]
        if missing:
            raise ValueError("%s needs %s" % (self.builder, ", ".join(missing)))
        return self

    def build(self, regions: Dict[str, pr.Region], state_dim: int) -> au.SymbolicAutomaton:
        if self.builder == "sequence_visit":
            return builders.build_sequence_visit(
                [regions[n] for n in self.regions], [regions[n] for n in self.avoid], state_dim
            )
        if self.builder == "any_order_visit":
            return builders.build_any_order_visit(
                [regions[n] for n in self.goals],
                self.dwell,
                [regions[n] for n in self.avoid],
                state_dim,
            )
        mu_cache: Dict = {}
        invariant, trigger, response = (
            parse_predicate(text, regions, mu_cache)
            for text in (self.invariant, self.trigger, self.response)
        )
        return builders.build_bounded_response(
            invariant, trigger, response, self.within, state_dim, regions
        )


class TransitionSpec(_Section):
    source: NonNegativeInt = Field(alias="from")
    target: NonNegativeInt = Field(alias="to")
    guard: GuardText


class InlineSpec(_Section):
    locations: PositiveInt
    initial: List[NonNegativeInt]
    accepting: List[NonNegativeInt]
    deterministic: bool = False
    complete: bool = False
    state_dim: Optional[NonNegativeInt] = None
    regions: Dict[str, RegionSpec] = {}
    transitions: List[TransitionSpec] = []

    def build(self, regions: Dict[str, pr.Region], state_dim: int) -> au.SymbolicAutomaton:
        # Scenario regions take precedence over the embedded ones.
        table = {name: spec.to_region(name) for name, spec in self.regions.items()}
        table.update(regions)
        return au.from_dict(self.model_dump(by_alias=True), table, state_dim)


def _read_json(path: str):
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


class FileSpec(_Section):
    file: str

    @field_validator("file")
    @classmethod
    def _readable_automaton(cls, name: str, info: ValidationInfo) -> str:
        base_dir = (info.context or {}).get("base_dir")
        path = os.path.join(base_dir, name) if base_dir else name
        try:
            d = _read_json(path)
        except (OSError, json.JSONDecodeError) as e:
            raise ValueError("cannot read %s: %s" % (path, e)) from e
        try:
            FileSpec.load(d, _regions_in(info))
        except ValidationError as e:
            raise ValueError("%s is not a valid automaton: %s" % (path, _summary(e))) from e
        return path

    @staticmethod
    def load(d, regions: Dict[str, pr.Region]) -> InlineSpec:
        table = region_table(d.get("regions") if isinstance(d, dict) else None)
        table.update(regions)
        return InlineSpec.model_validate(d, context={"regions": regions, "guard_regions": table})

    def build(self, regions: Dict[str, pr.Region], state_dim: int) -> au.SymbolicAutomaton:
        return FileSpec.load(_read_json(self.file), regions).build(regions, state_dim)


def _automaton_kind(d) -> Optional[str]:
    if isinstance(d, dict):
        if "builder" in d:
            return "builder_call"
        return "file_ref" if "file" in d else "inline"
    kinds = {BuilderSpec: "builder_call", FileSpec: "file_ref", InlineSpec: "inline"}
    return kinds.get(type(d))


AutomatonSpec = Annotated[
    Union[
        Annotated[BuilderSpec, Tag("builder_call")],
        Annotated[FileSpec, Tag("file_ref")],
        Annotated[InlineSpec, Tag("inline")],
    ],
    Discriminator(_automaton_kind),
]


class PlannerSpec(_Section):
    """Planner settings as written; unset fields fall back to the defaults."""

    horizon: Optional[PositiveInt] = None
    learning_rate: Optional[PositiveFloat] = None
    epochs: Optional[PositiveInt] = None
    semiring: Optional[SemiringTag] = None
    seed: Optional[int] = None
    control_bounds_mode: Optional[BoundsMode] = None
    early_stop: Optional[bool] = None
    restart_count: Optional[NonNegativeInt] = None
    solver: Optional[Solver] = None
    lr_schedule: Optional[LrSchedule] = None
    control_penalty: Optional[NonNegativeFloat] = None
    warm_start: Optional[bool] = None
    mpc_consumes_current_state: Optional[bool] = None
    prune_dead: Optional[bool] = None
    engine: Optional[Engine] = None

    def settings(self) -> Dict[str, Any]:
        return self.model_dump(exclude_unset=True, exclude={"total_steps"})


class PlannerSection(PlannerSpec):
    horizon: PositiveInt


class MpcSection(PlannerSpec):
    total_steps: NonNegativeInt = 0


class OutputsSpec(_Section):
    # Directory for result files, relative to the scenario file.
    dir: Optional[str] = None


class ScenarioDocument(_Section):
    name: str = Field(min_length=1)
    description: Optional[str] = None
    regions: Dict[str, RegionSpec] = {}
    dynamics: DynamicsSpec
    automaton: AutomatonSpec
    stl_formula: Optional[FormulaText] = None
    planner: PlannerSection
    mpc: MpcSection = Field(default_factory=MpcSection)
    mode: Mode = Mode.open_loop
    outputs: OutputsSpec = Field(default_factory=OutputsSpec)


@dataclass
class Scenario(object):
    name: str
    regions: Dict[str, pr.Region]
    automaton: au.SymbolicAutomaton
    model: DynamicsModel
    x0: Tuple[float, ...]
    planner: PlannerConfig
    mpc_planner: PlannerConfig
    total_steps: int
    mode: Mode = Mode.open_loop
    stl_formula: Optional[str] = None
    formula: Optional[stl.StlFormula] = None
    lead_profile: Optional[Tuple[Tuple[float, float], ...]] = None
    outputs: Dict[str, str] = field(default_factory=dict)
    # The normalized document, from which the scenario can be rebuilt.
    meta: Dict[str, Any] = field(default_factory=dict, repr=False)
    base_dir: Optional[str] = field(default=None, repr=False, compare=False)

    def config(self, mode: Optional[Mode] = None) -> PlannerConfig:
        mode = self.mode if mode is None else Mode(mode)
        return self.mpc_planner if mode is Mode.mpc else self.planner

    @property
    def output_dir(self) -> Optional[str]:
        """outputs.dir, resolved against the directory of the scenario file."""
        out = self.outputs.get("dir")
        if not out:
            return None
        return os.path.join(self.base_dir, out) if self.base_dir else out

    def content_hash(self) -> str:
        return hashlib.sha256(serialize(self).encode("utf-8")).hexdigest()


def _ptr(*parts) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in parts)


def _pointer(loc) -> str:
    loc = list(loc)
    if len(loc) > 1 and loc[0] == "automaton" and loc[1] in _AUTOMATON_TAGS:
        del loc[1]
    return _ptr(*loc)


def _problems(e: ValidationError) -> List[Tuple[str, str]]:
    return [(_pointer(err["loc"]), err["msg"]) for err in e.errors()]


def _summary(e: ValidationError) -> str:
    return "; ".join("%s: %s" % (pointer or "/", message) for pointer, message in _problems(e))


def _normalize(meta: dict) -> dict:
    """The document with defaults filled in, so equal scenarios serialize equally."""
    out = copy.deepcopy(meta)
    out.setdefault("regions", {})
    out.setdefault("mode", Mode.open_loop.value)
    out.setdefault("outputs", {})
    out.setdefault("mpc", {})
    return out


def _read_document(source, base_dir: Optional[str]) -> Tuple[Any, Optional[str]]:
    if isinstance(source, dict):
        return source, base_dir
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return json.loads(source), base_dir
    path = str(source)
    if not os.path.exists(path) and os.path.exists(os.path.join(settings.scenario_dir, path)):
        path = os.path.join(settings.scenario_dir, path)
    try:
        meta = _read_json(path)
    except OSError as e:
        raise ScenarioValidationError([("", "cannot read %s: %s" % (path, e))]) from e
    except json.JSONDecodeError as e:
        raise ScenarioValidationError([("", "%s is not JSON: %s" % (path, e))]) from e
    return meta, os.path.dirname(os.path.abspath(path)) if base_dir is None else base_dir


def load_scenario(source, base_dir: Optional[str] = None) -> Scenario:
    """Load and validate a scenario from a path, a JSON string or a dict.

    Raises:
        ScenarioValidationError: Lists every problem found, each with the
            JSON pointer of the offending value.
    """
    meta, base_dir = _read_document(source, base_dir)
    if not isinstance(meta, dict):
        raise ScenarioValidationError([("", "expected a JSON object")])
    meta = _normalize(meta)

    regions = region_table(meta["regions"])
    guard_regions = dict(regions)
    automaton_meta = meta.get("automaton")
    if isinstance(automaton_meta, dict) and isinstance(automaton_meta.get("regions"), dict):
        guard_regions = region_table(automaton_meta["regions"])
        guard_regions.update(regions)
    context = {"regions": regions, "guard_regions": guard_regions, "base_dir": base_dir}
    try:
        doc = ScenarioDocument.model_validate(meta, context=context)
    except ValidationError as e:
        raise ScenarioValidationError(_problems(e)) from e

    if doc.mode is Mode.mpc and doc.mpc.total_steps == 0:
        raise ScenarioValidationError(
            [(_ptr("mpc", "total_steps"), "mpc mode needs total_steps >= 1")]
        )
    model = doc.dynamics.to_model()
    try:
        automaton = doc.automaton.build(regions, model.state_dim)
    except (SwampError, ValueError, KeyError, TypeError) as e:
        raise ScenarioValidationError([(_ptr("automaton"), str(e))]) from e
    if automaton.state_dim != model.state_dim:
        raise ScenarioValidationError(
            [
                (
                    _ptr("automaton"),
                    "automaton reads %d state dimensions; %s states have %d"
                    % (automaton.state_dim, model.kind.value, model.state_dim),
                )
            ]
        )

    planner = PlannerConfig(**doc.planner.settings())
    mpc_planner = planner.replace(**doc.mpc.settings())
    text = doc.stl_formula
    return Scenario(
        name=doc.name,
        regions=regions,
        automaton=automaton,
        model=model,
        x0=tuple(doc.dynamics.x0),
        planner=planner,
        mpc_planner=mpc_planner,
        total_steps=doc.mpc.total_steps,
        mode=doc.mode,
        stl_formula=text,
        formula=None if text is None else parse_formula(text, regions),
        lead_profile=doc.dynamics.profile(),
        outputs=doc.outputs.model_dump(exclude_none=True),
        meta=meta,
        base_dir=base_dir,
    )


def to_meta(s: Scenario) -> dict:
    """The normalized scenario document; automata are embedded inline."""
    meta = copy.deepcopy(s.meta)
    if "file" in meta.get("automaton", {}):
        meta["automaton"] = au.to_dict(s.automaton)
    return meta


def serialize(s: Scenario) -> str:
    return json.dumps(to_meta(s), indent=2, sort_keys=True, ensure_ascii=False)


def bundled_scenarios() -> List[str]:
    return sorted(
        os.path.join(settings.scenario_dir, f)
        for f in os.listdir(settings.scenario_dir)
        if f.endswith(".json")
    )
