"""
osmoflow - Turtle emitter
Deterministic output: prefix header, subjects sorted, 'a' first, nested
blank nodes indented by a fixed step. Statements sharing a subject are merged.
"""

from typing import Dict, List

from config.settings import Settings
from ontology.terms import ClassId, Literal
from ttl.document import RDF_TYPE, BlankNode, TtlDocument, TtlObject, object_key, predicate_key


def _escape(text: str) -> str:
    return (text.replace('\\', '\\\\').replace('"', '\\"')
            .replace('\n', '\\n').replace('\r', '\\r').replace('\t', '\\t'))


def format_literal(lit: Literal) -> str:
    if lit.kind == 'boolean':
        return 'true' if lit.value else 'false'
    if lit.kind == 'integer':
        return str(int(lit.value))
    if lit.kind in ('real', 'quantity'):
        value = float(lit.value[0] if isinstance(lit.value, tuple) else lit.value)
        return repr(value)
    return f'"{_escape(str(lit.value))}"'


class TurtleEmitter:

    def __init__(self, indent: int = None):
        self.step = ' ' * (indent if indent is not None else Settings.TTL['indent'])

    def _name(self, cid: ClassId) -> str:
        return 'a' if cid == RDF_TYPE else str(cid)

    def _object(self, obj: TtlObject, depth: int) -> str:
        if isinstance(obj, BlankNode):
            if not obj.predicates:
                return '[ ]'
            inner = self._predicates(obj.predicates, depth + 1, first_inline=False)
            return '[\n' + inner + '\n' + self.step * depth + ']'
        if isinstance(obj, Literal):
            return format_literal(obj)
        return str(obj)

    def _predicates(self, predicates, depth: int, first_inline: bool) -> str:
        grouped: Dict[ClassId, List[TtlObject]] = {}
        for predicate, objects in predicates:
            grouped.setdefault(predicate, []).extend(objects)

        parts = []
        for i, predicate in enumerate(sorted(grouped, key=predicate_key)):
            objects = sorted(grouped[predicate], key=object_key)
            rendered = ', '.join(self._object(o, depth) for o in objects)
            lead = '' if (i == 0 and first_inline) else self.step * depth
            parts.append(f"{lead}{self._name(predicate)} {rendered}")
        return ';\n'.join(parts)

    def emit(self, doc: TtlDocument) -> str:
        doc = doc.with_standard_prefixes()
        lines = [f"@prefix {p}: <{doc.prefixes[p]}> ." for p in sorted(doc.prefixes)]

        merged: Dict[ClassId, list] = {}
        for statement in doc.statements:
            merged.setdefault(statement.subject, []).extend(statement.predicates)

        for subject in sorted(merged):
            lines.append('')
            body = self._predicates(merged[subject], 1, first_inline=True)
            lines.append(f"{subject} {body}.")
        return '\n'.join(lines) + '\n'


def emit_ttl(doc: TtlDocument, indent: int = None) -> str:
    return TurtleEmitter(indent).emit(doc)
