"""Exception hierarchy shared by all safewalk modules."""

from __future__ import annotations


class SafewalkError(Exception):
    """Base class for every error raised by this package."""

    code = "internal"


class InvalidCoordinateError(SafewalkError):
    code = "invalid-coordinate"


class InvalidParameterError(SafewalkError):
    code = "invalid-parameter"


class DegeneratePolygonError(SafewalkError):
    code = "degenerate-polygon"


class EmptyInputError(SafewalkError):
    code = "empty-input"


class MapParseError(SafewalkError):
    """Malformed map document; message carries line/element context."""

    code = "parse-error"


class EmptyMapError(SafewalkError):
    code = "empty-map"


class SchemaError(SafewalkError):
    """Device table is structurally unusable (missing column, bad header)."""

    code = "schema-error"


class DeviceTableError(SafewalkError):
    """Too many rejected rows to trust the table; carries row diagnostics."""

    code = "device-table-error"

    def __init__(self, message: str, row_errors: list[str] | None = None):
        super().__init__(message)
        self.row_errors = row_errors or []


class ReferentialIntegrityError(SafewalkError):
    code = "referential-integrity"


class NotFoundError(SafewalkError):
    code = "not-found"


class UndefinedModularityError(SafewalkError):
    code = "undefined-modularity"


class NoRouteError(SafewalkError):
    """Destination unreachable; names the components of both endpoints."""

    code = "no-route"

    def __init__(self, src: str, dst: str, src_component: int, dst_component: int):
        super().__init__(
            f"no route from {src!r} (component {src_component}) "
            f"to {dst!r} (component {dst_component})"
        )
        self.src = src
        self.dst = dst
        self.src_component = src_component
        self.dst_component = dst_component
