"""Exact-arithmetic experiments on polynomial expansion, sumset growth and
approximate subgroups of finite group actions."""

__version__ = "0.1.0"
