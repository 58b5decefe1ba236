"""Reader and writer for `.curve` files.

    # comment
    name = p521
    form = weierstrass        # or montgomery (a, b are then A, B)
    p = 1ff...ff
    a = 1ff...fc
    b = 51...00
    order = 1ff...09          # optional
    gx = c6...66              # optional, gx and gy go together
    gy = 11...50

Every number is lowercase big-endian hex without prefix.
"""

import os
from configparser import ConfigParser, Error as ConfigParserError
from dataclasses import dataclass
from functools import cached_property
from typing import Optional

from src.curve_core import AffinePoint, CurveParams, HasseBoundError, SingularCurveError, make_point
from src.fp_arith import NotPrimeError, PrimeModulus, parse_hex
from src.montgomery_baseline import MontgomeryCurve, weierstrass_model, weierstrass_point

SECTION = "curve"
FORM_WEIERSTRASS = "weierstrass"
FORM_MONTGOMERY = "montgomery"
FORMS = (FORM_WEIERSTRASS, FORM_MONTGOMERY)
HEX_KEYS = ("p", "a", "b", "order", "gx", "gy")
REQUIRED_KEYS = ("p", "a", "b")


class CurveFileError(ValueError):
    pass


@dataclass(frozen=True)
class CurveFile:
    name: str
    p: int
    a: int
    b: int
    order: Optional[int] = None
    gx: Optional[int] = None
    gy: Optional[int] = None
    form: str = FORM_WEIERSTRASS

    @property
    def is_montgomery(self) -> bool:
        return self.form == FORM_MONTGOMERY

    @cached_property
    def modulus(self) -> PrimeModulus:
        return PrimeModulus(self.p)

    @cached_property
    def montgomery(self) -> MontgomeryCurve:
        if not self.is_montgomery:
            raise CurveFileError(f"curve {self.name} is not a Montgomery curve")
        return MontgomeryCurve.create(self.modulus, self.a, self.b, self.order, self.name)

    @cached_property
    def params(self) -> CurveParams:
        """Short Weierstrass parameters; Montgomery files give their isomorphic model."""
        if self.is_montgomery:
            return weierstrass_model(self.montgomery)
        return CurveParams.create(self.modulus, self.a, self.b, self.order, self.name)

    @property
    def has_base_point(self) -> bool:
        return self.gx is not None

    def base_point(self) -> AffinePoint:
        if not self.has_base_point:
            raise CurveFileError(f"curve {self.name} has no base point")
        return self.point(self.gx, self.gy)

    def point(self, x: int, y: int) -> AffinePoint:
        """Point on params from file coordinates (Montgomery coordinates for Montgomery files)."""
        if self.is_montgomery:
            return weierstrass_point(self.montgomery, x, y)
        return make_point(self.params, x, y)

    def validate(self) -> "CurveFile":
        try:
            self.params
        except (NotPrimeError, SingularCurveError, HasseBoundError) as e:
            raise CurveFileError(f"{self.name}: {e}") from e
        return self


def _hex_value(key: str, text: str, source: str) -> int:
    try:
        return parse_hex(text)
    except ValueError as e:
        raise CurveFileError(f"{source}: bad value for {key}: {e}") from e


def parse_curve_text(text: str, source: str = "<string>") -> CurveFile:
    parser = ConfigParser(interpolation=None, comment_prefixes=("#",), inline_comment_prefixes=("#",))
    try:
        parser.read_string(f"[{SECTION}]\n{text}", source=source)
    except ConfigParserError as e:
        raise CurveFileError(f"{source}: {e}") from e
    entries = parser[SECTION]

    missing = [key for key in REQUIRED_KEYS if key not in entries]
    if missing:
        raise CurveFileError(f"{source}: missing {', '.join(missing)}")
    unknown = set(entries) - set(HEX_KEYS) - {"name", "form"}
    if unknown:
        raise CurveFileError(f"{source}: unknown keys {', '.join(sorted(unknown))}")

    values = {key: _hex_value(key, entries[key], source) for key in HEX_KEYS if key in entries}
    if ("gx" in values) != ("gy" in values):
        raise CurveFileError(f"{source}: gx and gy must be given together")
    for key in ("a", "b", "gx", "gy"):
        if key in values and values[key] >= values["p"]:
            raise CurveFileError(f"{source}: {key} is not reduced mod p")

    form = entries.get("form", FORM_WEIERSTRASS).strip().lower()
    if form not in FORMS:
        raise CurveFileError(f"{source}: unknown form {form!r}")
    name = entries.get("name", "").strip() or os.path.splitext(os.path.basename(source))[0]
    return CurveFile(name=name, form=form, **values).validate()


def load_curve_file(path: str) -> CurveFile:
    try:
        with open(path, "r") as f:
            text = f.read()
    except OSError as e:
        raise CurveFileError(f"cannot read curve file {path}: {e.strerror}") from e
    return parse_curve_text(text, source=path)


def serialize_curve(curve: CurveFile) -> str:
    lines = [f"name = {curve.name}", f"form = {curve.form}"]
    for key in HEX_KEYS:
        value = getattr(curve, key)
        if value is not None:
            lines.append(f"{key} = {value:x}")
    return "\n".join(lines) + "\n"

