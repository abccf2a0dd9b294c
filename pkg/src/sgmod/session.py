"""Session files: a single JSON document naming rings, monoids, modules,
submodules and series, plus a command list. Tables are arrays of arrays of
indices and series are arrays of {exponent, coefficient} pairs, so fixtures
stay diff-friendly and trivially parseable.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import bitset
from .errors import AlgebraError, SessionError
from .finite_algebra import (
    DEFAULT_MODULE_CAP,
    DEFAULT_RING_CAP,
    DEFAULT_ZMOD_CAP,
    FiniteModule,
    FiniteRing,
    Submodule,
    build_truncated_poly_ring,
    build_zmod,
    direct_sum,
    ideal_generated,
    module_from_tables,
    quotient_module,
    quotient_ring,
    ring_as_module,
    submodule_from_members,
    submodule_generated,
    zero_divisor_set,
)
from .monoids import (
    Monoid,
    cyclic_group_monoid,
    free_monoid,
    is_cancellative,
    is_torsion_free,
    monoid_from_table,
    saturating_monoid,
)
from .series import (
    Series,
    build_noncancellative_counterexample,
    build_torsion_counterexample,
    dedekind_mertens_exponent,
    is_zero_divisor_series,
    make_series,
    mccoy_witness,
)
from .verify import (
    DEFAULT_BUDGET,
    SupportWindow,
    verify_domain_prime_extension,
    verify_finite_ring_chain,
    verify_mccoy_equivalence,
    verify_regularity_transfer,
    verify_submodule_transfer,
    verify_zero_divisor_transfer,
)
from .zd import (
    NoPrimeCover,
    check_property_a,
    decompose_zero_divisors,
    has_very_few_zero_divisors,
    is_primal,
)

SESSION_KEYS = {"rings", "monoids", "modules", "submodules", "series", "commands",
                "settings"}

STATEMENTS = (
    "mccoy_equivalence",
    "domain_prime_extension",
    "submodule_transfer",
    "regularity_transfer",
    "zero_divisor_transfer",
    "finite_ring_chain",
)


@dataclass
class Session:
    rings: dict[str, FiniteRing] = field(default_factory=dict)
    monoids: dict[str, Monoid] = field(default_factory=dict)
    modules: dict[str, FiniteModule] = field(default_factory=dict)
    submodules: dict[str, Submodule] = field(default_factory=dict)
    series: dict[str, Series] = field(default_factory=dict)
    commands: list[dict] = field(default_factory=list)
    settings: dict = field(default_factory=dict)

    @property
    def budget(self) -> int:
        return int(self.settings.get("budget", DEFAULT_BUDGET))


class _Builder:
    def __init__(self, doc: dict):
        self.doc = doc
        self.session = Session(
            commands=list(doc.get("commands", [])),
            settings=dict(doc.get("settings", {})),
        )
        self._stack: list[tuple[str, str]] = []

    def build(self) -> Session:
        for kind in ("rings", "monoids", "modules", "submodules", "series"):
            section = self.doc.get(kind, {})
            if not isinstance(section, dict):
                raise SessionError(f"'{kind}' must be an object", obj=kind)
            for name in section:
                self._resolve(kind, name)
        reference_keys = {"ring": "rings", "module": "modules", "monoid": "monoids",
                          "submodule": "submodules", "f": "series", "g": "series"}
        for i, cmd in enumerate(self.session.commands):
            if not isinstance(cmd, dict) or "op" not in cmd:
                raise SessionError("command must be an object with an 'op' key",
                                   obj=f"commands[{i}]")
            for key, kind in reference_keys.items():
                name = cmd.get(key)
                if name is not None and name not in getattr(self.session, kind):
                    raise SessionError(
                        f"unresolved reference to {kind[:-1]} '{name}'",
                        obj=f"commands[{i}]")
        return self.session

    def _resolve(self, kind: str, name: str):
        store = getattr(self.session, kind)
        if name in store:
            return store[name]
        if (kind, name) in self._stack:
            cycle = " -> ".join(f"{k}:{n}" for k, n in self._stack) + f" -> {kind}:{name}"
            raise SessionError(f"cyclic definition: {cycle}", obj=f"{kind} '{name}'")
        section = self.doc.get(kind, {})
        if name not in section:
            raise SessionError(f"unresolved reference to {kind[:-1]} '{name}'",
                               obj=f"{kind} '{name}'")
        self._stack.append((kind, name))
        try:
            value = getattr(self, f"_build_{kind[:-1]}")(name, section[name])
        except SessionError:
            raise
        except AlgebraError as exc:
            raise SessionError(str(exc), obj=f"{kind[:-1]} '{name}'") from exc
        except (KeyError, TypeError, ValueError) as exc:
            raise SessionError(f"malformed definition: {exc!r}",
                               obj=f"{kind[:-1]} '{name}'") from exc
        finally:
            self._stack.pop()
        store[name] = value
        return value

    def _build_ring(self, name: str, defn: dict) -> FiniteRing:
        kind = defn.get("kind")
        settings = self.session.settings
        if kind == "zmod":
            return build_zmod(int(defn["n"]),
                              cap=int(settings.get("zmod_cap", DEFAULT_ZMOD_CAP)))
        if kind == "truncated_poly":
            return build_truncated_poly_ring(
                int(defn["p"]), int(defn["nvars"]), int(defn["cap"]),
                size_cap=int(settings.get("ring_cap", DEFAULT_RING_CAP)))
        if kind == "quotient":
            base = self._resolve("rings", defn["ring"])
            ideal = ideal_generated(base, [int(g) for g in defn.get("gens", [])])
            return quotient_ring(base, ideal)
        if kind == "tables":
            ring = FiniteRing(defn["add"], defn["mul"], int(defn["zero"]),
                              int(defn["one"]), label=name)
            if ring.size > int(settings.get("ring_cap", DEFAULT_RING_CAP)):
                raise SessionError(f"ring size {ring.size} exceeds cap", obj=name)
            return ring
        raise SessionError(f"unknown ring kind {kind!r}", obj=f"ring '{name}'")

    def _build_monoid(self, name: str, defn: dict) -> Monoid:
        kind = defn.get("kind")
        if kind == "free":
            return free_monoid(int(defn.get("dim", 1)))
        if kind == "cyclic_group":
            return cyclic_group_monoid(int(defn["k"]))
        if kind == "saturating":
            return saturating_monoid(int(defn["c"]))
        if kind == "table":
            return monoid_from_table(defn["cayley"], int(defn["identity"]), label=name)
        raise SessionError(f"unknown monoid kind {kind!r}", obj=f"monoid '{name}'")

    def _build_module(self, name: str, defn: dict) -> FiniteModule:
        kind = defn.get("kind")
        if kind == "ring_as_module":
            return ring_as_module(self._resolve("rings", defn["ring"]))
        if kind == "quotient":
            base = self._resolve("modules", defn["module"])
            sub = self._resolve("submodules", defn["submodule"])
            return quotient_module(base, sub)
        if kind == "direct_sum":
            return direct_sum(self._resolve("modules", defn["left"]),
                              self._resolve("modules", defn["right"]))
        if kind == "tables":
            ring = self._resolve("rings", defn["ring"])
            return module_from_tables(
                ring, defn["add"], defn["action"], int(defn["zero"]), label=name,
                cap=int(self.session.settings.get("module_cap", DEFAULT_MODULE_CAP)))
        raise SessionError(f"unknown module kind {kind!r}", obj=f"module '{name}'")

    def _build_submodule(self, name: str, defn: dict) -> Submodule:
        module = self._resolve("modules", defn["module"])
        if "members" in defn:
            return submodule_from_members(module, [int(x) for x in defn["members"]])
        return submodule_generated(module, [int(g) for g in defn.get("gens", [])])

    def _build_serie(self, name: str, defn: dict) -> Series:
        if "ring" in defn:
            space = self._resolve("rings", defn["ring"])
        elif "module" in defn:
            space = self._resolve("modules", defn["module"])
        else:
            raise SessionError("series needs a 'ring' or 'module' key",
                               obj=f"series '{name}'")
        monoid = self._resolve("monoids", defn["monoid"])
        terms = []
        for item in defn.get("terms", []):
            terms.append((_exponent_for(monoid, item["exponent"]), int(item["coefficient"])))
        return make_series(space, monoid, terms)

    # section name "series" strips to "serie"
    _build_series = _build_serie


def _reject_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise SessionError(f"duplicate name {key!r}")
        seen.add(key)
    return dict(pairs)


def _exponent_key(raw):
    if isinstance(raw, list):
        return tuple(int(x) for x in raw)
    return int(raw)


def _exponent_for(monoid: Monoid, raw):
    key = _exponent_key(raw)
    if not monoid.is_finite and isinstance(key, int) and monoid.dim == 1:
        return (key,)
    return key


def load_session(path: str) -> Session:
    """Parse and validate a session file; all objects are constructed eagerly."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SessionError(f"cannot read session file: {exc}")
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicate_keys)
    except json.JSONDecodeError as exc:
        raise SessionError(f"parse error: {exc.msg}", line=exc.lineno, column=exc.colno)
    if not isinstance(doc, dict):
        raise SessionError("session document must be a JSON object")
    unknown = set(doc) - SESSION_KEYS
    if unknown:
        raise SessionError(f"unknown top-level keys: {sorted(unknown)}")
    return _Builder(doc).build()


def dump_session(session: Session) -> dict:
    """Serialize every object back to the structured format (tables variant)."""
    doc: dict = {"rings": {}, "monoids": {}, "modules": {}, "submodules": {},
                 "series": {}, "commands": session.commands,
                 "settings": session.settings}
    for name, ring in session.rings.items():
        doc["rings"][name] = {
            "kind": "tables",
            "add": ring.add_table.tolist(),
            "mul": ring.mul_table.tolist(),
            "zero": ring.zero,
            "one": ring.one,
        }
    for name, monoid in session.monoids.items():
        if monoid.is_finite:
            doc["monoids"][name] = {"kind": "table", "cayley": monoid.cayley.tolist(),
                                    "identity": monoid.identity}
        else:
            doc["monoids"][name] = {"kind": "free", "dim": monoid.dim}
    for name, module in session.modules.items():
        ring_name = _name_of(session.rings, module.ring)
        if ring_name is None:
            ring_name = f"__ring_of_{name}"
            doc["rings"][ring_name] = {
                "kind": "tables",
                "add": module.ring.add_table.tolist(),
                "mul": module.ring.mul_table.tolist(),
                "zero": module.ring.zero,
                "one": module.ring.one,
            }
        doc["modules"][name] = {
            "kind": "tables",
            "ring": ring_name,
            "add": module.add_table.tolist(),
            "action": module.action_table.tolist(),
            "zero": module.zero,
        }
    for name, sub in session.submodules.items():
        doc["submodules"][name] = {
            "module": _name_of(session.modules, sub.module),
            "members": list(sub.members_tuple()),
        }
    for name, series in session.series.items():
        ref = {}
        if isinstance(series.space, FiniteRing):
            ref["ring"] = _name_of(session.rings, series.space)
        else:
            ref["module"] = _name_of(session.modules, series.space)
        ref["monoid"] = _name_of(session.monoids, series.monoid)
        ref["terms"] = [{"exponent": list(e) if isinstance(e, tuple) else e,
                         "coefficient": c} for e, c in series.terms]
        doc["series"][name] = ref
    return doc


def _name_of(store: dict, obj) -> str | None:
    for name, value in store.items():
        if value is obj:
            return name
    return None


# ---------------------------------------------------------------------------
# command dispatch


def execute(session: Session, command: dict, budget: int | None = None) -> dict:
    """Run one command and return its record; errors become error records."""
    t0 = time.perf_counter()
    effective_budget = budget if budget is not None else session.budget
    try:
        payload = _dispatch(session, command, effective_budget)
        status = "ok"
    except AlgebraError as exc:
        payload = {"error": {"type": type(exc).__name__, "message": str(exc)}}
        status = "error"
    except (KeyError, TypeError, ValueError) as exc:
        payload = {"error": {"type": type(exc).__name__,
                             "message": f"malformed command arguments: {exc!r}"}}
        status = "error"
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return {"command": command, "status": status, "payload": _jsonable(payload),
            "elapsed_ms": elapsed_ms}


def _dispatch(session: Session, command: dict, budget: int) -> dict:
    op = command.get("op")
    if op == "analyze":
        return _cmd_analyze(session, command)
    if op == "dm":
        return _cmd_dm(session, command)
    if op == "mccoy":
        return _cmd_mccoy(session, command)
    if op == "zdtest":
        return _cmd_zdtest(session, command)
    if op == "counterexample":
        return _cmd_counterexample(session, command)
    if op == "verify":
        return _cmd_verify(session, command, budget)
    raise SessionError(f"unknown command op {op!r}")


def _get(session: Session, kind: str, command: dict, key: str):
    name = command.get(key)
    if name is None:
        raise SessionError(f"command '{command.get('op')}' needs a '{key}' argument")
    store = getattr(session, kind)
    if name not in store:
        raise SessionError(f"unresolved reference to {kind[:-1]} '{name}'")
    return store[name]


def _cmd_analyze(session: Session, command: dict) -> dict:
    module = _get(session, "modules", command, "module")
    zmask = zero_divisor_set(module)
    decomp = decompose_zero_divisors(module)
    if isinstance(decomp, NoPrimeCover):
        decomposition = {"no_prime_cover": {"uncovered": decomp.uncovered,
                                            "candidates": [list(c.members_tuple())
                                                           for c in decomp.candidates]}}
        degree = None
    else:
        decomposition = {
            "primes": [list(p.members_tuple()) for p in decomp.primes],
            "witnesses": list(decomp.witnesses),
            "degree": decomp.degree,
            "covers": decomp.covers,
            "incomparable": decomp.incomparable,
        }
        degree = decomp.degree
    very_few = has_very_few_zero_divisors(module)
    prop_a = check_property_a(module)
    primal = is_primal(module)
    return {
        "module": module.label,
        "zero_divisors": list(bitset.members(zmask)),
        "decomposition": decomposition,
        "degree": degree,
        "very_few": {"holds": very_few.holds,
                     "primes": [list(p.members_tuple()) for p in very_few.primes],
                     "witnesses": list(very_few.witnesses),
                     "uncovered": very_few.uncovered},
        "property_a": {"holds": prop_a.holds,
                       "checked_ideals": prop_a.checked_ideals,
                       "witnesses": [{"ideal": list(i.members_tuple()), "annihilated_by": m}
                                     for i, m in prop_a.witnesses],
                       "failure": None if prop_a.failure is None
                       else list(prop_a.failure.members_tuple())},
        "primal": {"is_primal": primal.is_primal,
                   "ideal": None if primal.zero_divisor_ideal is None
                   else list(primal.zero_divisor_ideal.members_tuple()),
                   "violation": None if primal.violation is None
                   else list(primal.violation)},
    }


def _series_payload(series: Series) -> list:
    return [[list(e) if isinstance(e, tuple) else e, c] for e, c in series.terms]


def _cmd_dm(session: Session, command: dict) -> dict:
    f = _get(session, "series", command, "f")
    g = _get(session, "series", command, "g")
    cap = command.get("cap")
    result = dedekind_mertens_exponent(f, g, cap=None if cap is None else int(cap))
    return {
        "k_min": result.k_min,
        "cap_used": result.cap_used,
        "chain": [{"k": step.k,
                   "lhs": list(step.lhs.members_tuple()),
                   "rhs": list(step.rhs.members_tuple()),
                   "equal": step.equal} for step in result.chain],
    }


def _cmd_mccoy(session: Session, command: dict) -> dict:
    f = _get(session, "series", command, "f")
    g = _get(session, "series", command, "g")
    witness = mccoy_witness(f, g)
    return {"witness": witness}


def _cmd_zdtest(session: Session, command: dict) -> dict:
    f = _get(session, "series", command, "f")
    module = _get(session, "modules", command, "module")
    verdict = is_zero_divisor_series(f, module)
    return {"is_zero_divisor": verdict.is_zero_divisor,
            "witness": verdict.witness,
            "annihilator": list(verdict.annihilator.members_tuple())}


def _cmd_counterexample(session: Session, command: dict) -> dict:
    kind = command.get("kind")
    monoid = _get(session, "monoids", command, "monoid")
    module = _get(session, "modules", command, "module")
    q = int(command.get("q", 1))
    if kind == "noncancellative":
        witness = command.get("witness")
        if witness is None:
            ok, witness = is_cancellative(monoid)
            if ok:
                raise SessionError("monoid is cancellative; no witness available")
        s, t, u = (_exponent_for(monoid, x) for x in witness)
        f, g = build_noncancellative_counterexample(monoid, (s, t, u), module, q)
        return {"kind": kind, "witness": [s, t, u], "q": q,
                "f": _series_payload(f), "g": _series_payload(g),
                "product_zero": True, "no_single_annihilator": True}
    if kind == "torsion":
        if "s" in command and "t" in command:
            s, t = _exponent_for(monoid, command["s"]), _exponent_for(monoid, command["t"])
        else:
            ok, witness = is_torsion_free(monoid)
            if ok:
                raise SessionError("monoid is torsion-free; no witness available")
            s, t, _ = witness
        k, h, g = build_torsion_counterexample(monoid, s, t, module, q)
        return {"kind": kind, "s": s, "t": t, "q": q, "k": k,
                "h": _series_payload(h), "g": _series_payload(g),
                "product_zero": True, "exponents_distinct": True}
    raise SessionError(f"unknown counterexample kind {kind!r}")


def _cmd_verify(session: Session, command: dict, budget: int) -> dict:
    statement = command.get("statement")
    if statement not in STATEMENTS:
        raise SessionError(f"unknown statement {statement!r}; expected one of {STATEMENTS}")
    if statement == "finite_ring_chain":
        report = verify_finite_ring_chain(_get(session, "rings", command, "ring"))
        return report.to_payload()
    monoid = _get(session, "monoids", command, "monoid")
    window = _window_from(command, monoid)
    if statement == "mccoy_equivalence":
        report = verify_mccoy_equivalence(
            _get(session, "rings", command, "ring"),
            _get(session, "modules", command, "module"),
            monoid, window, budget=budget)
    elif statement == "domain_prime_extension":
        module = None
        if command.get("module") is not None:
            module = _get(session, "modules", command, "module")
        report = verify_domain_prime_extension(
            _get(session, "rings", command, "ring"), module, monoid, window,
            budget=budget)
    elif statement == "submodule_transfer":
        sub = _get(session, "submodules", command, "submodule")
        report = verify_submodule_transfer(sub.module, sub, monoid, window,
                                           budget=budget)
    elif statement == "regularity_transfer":
        report = verify_regularity_transfer(
            _get(session, "rings", command, "ring"),
            _get(session, "modules", command, "module"),
            monoid, window, budget=budget)
    else:
        report = verify_zero_divisor_transfer(
            _get(session, "rings", command, "ring"),
            _get(session, "modules", command, "module"),
            monoid, window, budget=budget)
    return report.to_payload()


def _window_from(command: dict, monoid: Monoid) -> SupportWindow:
    raw = command.get("window")
    if raw is None:
        raise SessionError(f"command 'verify {command.get('statement')}' needs a 'window'")
    exponents = tuple(_exponent_for(monoid, e) for e in raw)
    max_support = command.get("max_support")
    return SupportWindow(exponents, None if max_support is None else int(max_support))


def _jsonable(value):
    """Coerce numpy scalars so payloads serialize deterministically."""
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    return value
