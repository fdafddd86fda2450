"""
osmoflow - Turtle subset parser

Accepted: @prefix directives, prefixed names, 'a', ';' and ',' lists,
nested '[ ]' blank nodes, double-quoted strings with escapes, integer,
decimal, double and boolean literals, '#' comments. Everything else
(full IRIs as terms, '_:' labels, collections, typed or tagged
literals, long strings) is rejected with the 1-based position of the
first offending token.
"""

import bisect
import math
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from core.errors import TtlSyntaxError, UnknownPrefix
from ontology.terms import ClassId, Literal
from ttl.document import RDF_TYPE, BlankNode, Statement, TtlDocument, TtlObject

TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<iri><[^<>"{}|^`\\\s]*>)
  | (?P<string>"(?:[^"\\\n\r]|\\.)*")
  | (?P<double>[+-]?(?:\d+\.\d*[eE][+-]?\d+|\.\d+[eE][+-]?\d+|\d+[eE][+-]?\d+))
  | (?P<decimal>[+-]?\d*\.\d+)
  | (?P<integer>[+-]?\d+)
  | (?P<directive>@prefix\b)
  | (?P<pname>(?:[A-Za-z][\w-]*)?:(?:\w(?:[\w.-]*[\w-])?)?)
  | (?P<word>[A-Za-z][\w-]*)
  | (?P<punct>[.;,\[\]])
""", re.VERBOSE)

ESCAPES = {'t': '\t', 'n': '\n', 'r': '\r', '"': '"', "'": "'", '\\': '\\'}

# Deeper '[' nesting than this is refused instead of recursing further
MAX_NESTING = 200


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


class Tokenizer:

    def __init__(self, text: str):
        self.text = text
        self.line_starts = [0] + [m.end() for m in re.finditer('\n', text)]

    def position(self, offset: int) -> Tuple[int, int]:
        row = bisect.bisect_right(self.line_starts, offset) - 1
        return row + 1, offset - self.line_starts[row] + 1

    def tokens(self) -> List[Token]:
        out, pos, text = [], 0, self.text
        while pos < len(text):
            m = TOKEN_RE.match(text, pos)
            if m is None:
                line, col = self.position(pos)
                if text[pos] == '"':
                    raise TtlSyntaxError(line, col, 'closing quote on the same line', text[pos:pos + 20])
                raise TtlSyntaxError(line, col, 'token', text[pos])
            kind = m.lastgroup
            if kind not in ('ws', 'comment'):
                line, col = self.position(pos)
                out.append(Token(kind, m.group(), line, col))
            pos = m.end()
        line, col = self.position(len(text))
        out.append(Token('eof', '', line, col))
        return out


class TurtleParser:
    """Recursive descent over the token list"""

    def __init__(self, text: str):
        self.tokens = Tokenizer(text).tokens()
        self.index = 0
        self.prefixes = {}
        self.depth = 0

    # ========== TOKEN HELPERS ==========

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _advance(self) -> Token:
        tok = self.tokens[self.index]
        if tok.kind != 'eof':
            self.index += 1
        return tok

    def _fail(self, expected: str, tok: Optional[Token] = None):
        tok = tok or self.current
        found = 'end of input' if tok.kind == 'eof' else tok.text
        raise TtlSyntaxError(tok.line, tok.col, expected, found)

    def _punct(self, symbol: str) -> bool:
        tok = self.current
        return tok.kind == 'punct' and tok.text == symbol

    def _expect(self, symbol: str) -> Token:
        if not self._punct(symbol):
            self._fail(f"'{symbol}'")
        return self._advance()

    # ========== GRAMMAR ==========

    def parse(self) -> TtlDocument:
        statements = []
        while self.current.kind != 'eof':
            if self.current.kind == 'directive':
                self._prefix_directive()
            else:
                statements.append(self._statement())
        return TtlDocument(dict(self.prefixes), statements)

    def _prefix_directive(self):
        self._advance()
        tok = self.current
        if tok.kind != 'pname' or not tok.text.endswith(':'):
            self._fail("prefix name ending in ':'")
        self._advance()
        iri = self.current
        if iri.kind != 'iri':
            self._fail('IRI in angle brackets')
        self._advance()
        self._expect('.')
        self.prefixes[tok.text[:-1]] = iri.text[1:-1]

    def _statement(self) -> Statement:
        tok = self.current
        if tok.kind != 'pname':
            self._fail('prefixed name as subject')
        subject = self._name(self._advance())
        predicates = self._predicate_object_list(closing='.')
        self._expect('.')
        return Statement(subject, predicates, tok.line)

    def _predicate_object_list(self, closing: str):
        predicates = [self._predicate_objects()]
        while self._punct(';'):
            self._advance()
            while self._punct(';'):
                self._advance()
            if self._punct(closing):
                break
            predicates.append(self._predicate_objects())
        return predicates

    def _predicate_objects(self):
        tok = self.current
        if tok.kind == 'word' and tok.text == 'a':
            self._advance()
            predicate = RDF_TYPE
        elif tok.kind == 'pname':
            predicate = self._name(self._advance())
        else:
            self._fail("predicate ('a' or prefixed name)")
        objects = [self._object()]
        while self._punct(','):
            self._advance()
            objects.append(self._object())
        return predicate, objects

    def _object(self) -> TtlObject:
        tok = self.current
        kind = tok.kind
        if kind == 'pname':
            return self._name(self._advance())
        if kind == 'string':
            self._advance()
            return Literal(self._unescape(tok), 'string')
        if kind == 'integer':
            self._advance()
            return Literal(int(tok.text), 'integer')
        if kind in ('decimal', 'double'):
            value = float(tok.text)
            if not math.isfinite(value):
                self._fail('finite number')
            self._advance()
            return Literal(value, 'real')
        if kind == 'word' and tok.text in ('true', 'false'):
            self._advance()
            return Literal(tok.text == 'true', 'boolean')
        if kind == 'punct' and tok.text == '[':
            return self._blank_node()
        self._fail('object (prefixed name, literal or [ ])')

    def _blank_node(self) -> BlankNode:
        opening = self._advance()
        if self.depth >= MAX_NESTING:
            raise TtlSyntaxError(opening.line, opening.col, f"at most {MAX_NESTING} nested blank nodes", '[')
        self.depth += 1
        try:
            predicates = [] if self._punct(']') else self._predicate_object_list(closing=']')
            self._expect(']')
        finally:
            self.depth -= 1
        return BlankNode(predicates, opening.line)

    # ========== TERMS ==========

    def _name(self, tok: Token) -> ClassId:
        prefix, _, local = tok.text.partition(':')
        if not local:
            self._fail('local name after the prefix', tok)
        if prefix not in self.prefixes:
            raise UnknownPrefix(prefix, tok.line, tok.col)
        return ClassId(prefix, local)

    def _unescape(self, tok: Token) -> str:
        body = tok.text[1:-1]
        if '\\' not in body:
            return body
        out, i = [], 0
        while i < len(body):
            ch = body[i]
            if ch == '\\':
                code = body[i + 1]
                if code not in ESCAPES:
                    raise TtlSyntaxError(tok.line, tok.col + 1 + i, 'escape sequence', '\\' + code)
                out.append(ESCAPES[code])
                i += 2
            else:
                out.append(ch)
                i += 1
        return ''.join(out)


def parse_ttl(text: str) -> TtlDocument:
    return TurtleParser(text).parse()
