#!/usr/bin/env python3
"""Lightweight static checker for Python snippets.

Flags syntax errors and references to names that are neither defined
anywhere in the file nor builtins. Output format matches the common
checker convention: path:line:col: message. Exit status 1 when findings
exist, 0 when clean.

A full scope-aware checker (e.g. pyflakes) can be dropped in instead;
this one errs on the permissive side to avoid false positives.
"""

import ast
import builtins
import sys


class DefinedNames(ast.NodeVisitor):
    """Collect every name the module binds anywhere (flat approximation)."""

    def __init__(self):
        self.names = set(dir(builtins))
        self.names.update({"__file__", "__name__", "__doc__", "__builtins__"})

    def visit_Import(self, node):
        for alias in node.names:
            self.names.add((alias.asname or alias.name).split(".")[0])

    def visit_ImportFrom(self, node):
        for alias in node.names:
            if alias.name == "*":
                self.names.add("*")
            else:
                self.names.add(alias.asname or alias.name)

    def visit_FunctionDef(self, node):
        self._handle_function(node)

    def visit_AsyncFunctionDef(self, node):
        self._handle_function(node)

    def _handle_function(self, node):
        self.names.add(node.name)
        args = node.args
        for a in (
            list(args.posonlyargs)
            + list(args.args)
            + list(args.kwonlyargs)
            + ([args.vararg] if args.vararg else [])
            + ([args.kwarg] if args.kwarg else [])
        ):
            self.names.add(a.arg)
        self.generic_visit(node)

    def visit_ClassDef(self, node):
        self.names.add(node.name)
        self.generic_visit(node)

    def visit_Lambda(self, node):
        args = node.args
        for a in list(args.posonlyargs) + list(args.args) + list(args.kwonlyargs):
            self.names.add(a.arg)
        if args.vararg:
            self.names.add(args.vararg.arg)
        if args.kwarg:
            self.names.add(args.kwarg.arg)
        self.generic_visit(node)

    def visit_Name(self, node):
        if isinstance(node.ctx, (ast.Store, ast.Del)):
            self.names.add(node.id)

    def visit_ExceptHandler(self, node):
        if node.name:
            self.names.add(node.name)
        self.generic_visit(node)

    def visit_Global(self, node):
        self.names.update(node.names)

    def visit_Nonlocal(self, node):
        self.names.update(node.names)


def check(path):
    with open(path, "rb") as fh:
        source = fh.read()
    try:
        tree = ast.parse(source, filename=path)
    except SyntaxError as exc:
        line = exc.lineno or 0
        col = exc.offset or 0
        print("%s:%d:%d: invalid syntax (SyntaxError: %s)" % (path, line, col, exc.msg))
        return 1

    defined = DefinedNames()
    defined.visit(tree)
    if "*" in defined.names:
        # A star import can bind anything; undefined-name analysis is off.
        return 0

    findings = []
    for node in ast.walk(tree):
        if isinstance(node, ast.Name) and isinstance(node.ctx, ast.Load):
            if node.id not in defined.names:
                findings.append((node.lineno, node.col_offset, node.id))

    for line, col, name in sorted(findings):
        print("%s:%d:%d: undefined name '%s'" % (path, line, col, name))
    return 1 if findings else 0


def main(argv):
    if len(argv) != 2:
        print("usage: pycheck.py <file>", file=sys.stderr)
        return 2
    return check(argv[1])


if __name__ == "__main__":
    sys.exit(main(sys.argv))
