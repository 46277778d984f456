"""Pro-completions of finite algebraic structures: towers, pro-morphisms and strictified actions."""

__version__ = "0.1.0"
