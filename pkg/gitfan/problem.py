"""
Loading and validation of problem files (JSON).

A problem names the group, the module and optionally some characters:

    {
      "name": "Gr(2,4)",
      "group": {"gl": [2], "torus": 0},
      "module": [{"kind": "std", "block": 0, "multiplicity": 4}],
      "characters": {"det": [1]}
    }

The module may instead be given as raw torus weights,
{"weights": [[1, 0], [0, 1]], "multiplicities": [1, 1]}, one column per entry.
"""
import json
from dataclasses import dataclass, field

from .groupdata import GroupSpec, KernelNotFiniteError, ModuleSpec, Summand, build_group, SUMMAND_KINDS


class SchemaError(ValueError):
    kind = "schema"


def _int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{where}: expected an integer, got {value!r}")
    return value


def _int_list(value, where):
    if not isinstance(value, list):
        raise SchemaError(f"{where}: expected a list of integers, got {value!r}")
    return tuple(_int(x, f"{where}[{i}]") for i, x in enumerate(value))


def _parse_group(data):
    if not isinstance(data, dict):
        raise SchemaError("group: expected an object with 'gl' and 'torus'")
    unknown = set(data) - {"gl", "torus"}
    if unknown:
        raise SchemaError(f"group: unknown keys {sorted(unknown)}")
    gl = _int_list(data.get("gl", []), "group.gl")
    torus = _int(data.get("torus", 0), "group.torus")
    try:
        return GroupSpec(gl_blocks=gl, torus_rank=torus)
    except ValueError as e:
        raise SchemaError(f"group: {e}") from e


def _parse_summand(i, data):
    where = f"module[{i}]"
    if not isinstance(data, dict):
        raise SchemaError(f"{where}: expected an object")
    kind = data.get("kind")
    if kind not in SUMMAND_KINDS:
        raise SchemaError(f"{where}: kind must be one of {list(SUMMAND_KINDS)}, got {kind!r}")
    unknown = set(data) - {"kind", "block", "src", "dst", "weight", "twist", "multiplicity"}
    if unknown:
        raise SchemaError(f"{where}: unknown keys {sorted(unknown)}")

    fields = {"kind": kind, "multiplicity": _int(data.get("multiplicity", 1), f"{where}.multiplicity")}
    if kind in ("std", "dual_std"):
        if "block" not in data:
            raise SchemaError(f"{where}: '{kind}' needs 'block'")
        fields["block"] = _int(data["block"], f"{where}.block")
    elif kind == "hom":
        for key in ("src", "dst"):
            if key not in data:
                raise SchemaError(f"{where}: 'hom' needs '{key}'")
            fields[key] = _int(data[key], f"{where}.{key}")
    else:
        if "weight" not in data:
            raise SchemaError(f"{where}: 'torus_char' needs 'weight'")
        fields["weight"] = _int_list(data["weight"], f"{where}.weight")
    if "twist" in data:
        fields["twist"] = _int_list(data["twist"], f"{where}.twist")
    return Summand(**fields)


def _parse_raw_weights(data):
    weights = data.get("weights")
    if not isinstance(weights, list) or not weights:
        raise SchemaError("module.weights: expected a nonempty list of integer vectors")
    rows = [_int_list(w, f"module.weights[{i}]") for i, w in enumerate(weights)]
    if len({len(r) for r in rows}) != 1:
        raise SchemaError("module.weights: vectors have different lengths")
    mults = data.get("multiplicities", [1] * len(rows))
    mults = _int_list(mults, "module.multiplicities")
    if len(mults) != len(rows):
        raise SchemaError("module.multiplicities: length differs from module.weights")
    return tuple(Summand(kind="torus_char", weight=w, multiplicity=m) for w, m in zip(rows, mults))


@dataclass(frozen=True)
class ProblemFile:
    group: GroupSpec
    module: ModuleSpec
    characters: dict = field(default_factory=dict, compare=False)
    name: str = ""

    @staticmethod
    def from_dict(data):
        if not isinstance(data, dict):
            raise SchemaError("problem: expected a JSON object")
        if "group" not in data or "module" not in data:
            raise SchemaError("problem: 'group' and 'module' are required")
        group = _parse_group(data["group"])

        module = data["module"]
        if isinstance(module, dict):
            summands = _parse_raw_weights(module)
        elif isinstance(module, list):
            summands = tuple(_parse_summand(i, s) for i, s in enumerate(module))
        else:
            raise SchemaError("module: expected a list of summands or a raw weight object")

        characters = {}
        for key, value in (data.get("characters") or {}).items():
            coords = _int_list(value, f"characters.{key}")
            if len(coords) != group.char_rank:
                raise SchemaError(f"characters.{key}: needs {group.char_rank} coordinates")
            characters[key] = coords

        name = data.get("name", "")
        if not isinstance(name, str):
            raise SchemaError("name: expected a string")
        return ProblemFile(group=group, module=ModuleSpec(summands=summands), characters=characters, name=name)

    @staticmethod
    def loads(text):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise SchemaError(f"invalid JSON: {e}") from e
        return ProblemFile.from_dict(data)

    def build(self):
        """
        Returns:
            tuple: (GroupData, WeightSystem)

        Raises:
            KernelNotFiniteError: if the weights do not span X*(T).
            SchemaError: for module entries inconsistent with the group.
        """
        try:
            return build_group(self.group, self.module)
        except KernelNotFiniteError:
            raise
        except ValueError as e:
            raise SchemaError(str(e)) from e

    def character(self, text):
        """Parses a character given as "a,b,..." or as a name from the problem file."""
        if text in self.characters:
            return self.characters[text]
        try:
            coords = tuple(int(x) for x in text.split(","))
        except ValueError as e:
            raise SchemaError(f"--chi: cannot parse {text!r} as integers or a known character name") from e
        if len(coords) != self.group.char_rank:
            raise SchemaError(f"--chi: needs {self.group.char_rank} coordinates, got {len(coords)}")
        return coords
