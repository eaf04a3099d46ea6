# User-facing message catalogue for the command-line front-end.
# Keys are stable; templates use str.format placeholders.

MESSAGES = {
    "prog_description": (
        "Numerical steepest descent quadrature for oscillatory integrals "
        "f(z) exp(i omega g(z)) with polynomial phase g."
    ),
    "coefficient_order_note": "Coefficients are given highest degree first, e.g. --g \"1,0,-1\" for z^2 - 1.",

    # Errors (one line on stderr)
    "error_input": "input error: {error}",
    "error_numerical": "numerical failure: {error}",
    "error_output_path": "cannot write output: {error}",
    "error_unknown_template": "unknown template {name!r}; available: {available}",

    # Progress and status
    "status_grid_progress": "grid: {done} / {total} points ({percent:.0f}%)",
    "status_written": "wrote {path}",

    # Diagnostics summary
    "diag_header": "diagnostics:",
    "diag_line": "  {key}: {value}",
}


def t(key: str, /, **kwargs) -> str:
    """Look up a message and fill its placeholders."""
    template = MESSAGES.get(key, key)
    return template.format(**kwargs) if kwargs else template


class Strings:
    """Named accessors for the messages used in several places."""

    @staticmethod
    def input_error(error) -> str:
        return t("error_input", error=error)

    @staticmethod
    def numerical_error(error) -> str:
        return t("error_numerical", error=error)

    @staticmethod
    def grid_progress(done: int, total: int) -> str:
        return t("status_grid_progress", done=done, total=total, percent=100.0 * done / max(total, 1))

    @staticmethod
    def written(path) -> str:
        return t("status_written", path=path)


_strings = Strings()


def get_strings() -> Strings:
    """Get the Strings instance."""
    return _strings
