"""
語の構文解析 (ply)

    a b c      生成元      A B C   逆元
    uv, u*v    積          u^n     冪 (n は負でもよい)
    [u, v]     交換子 (左正規: [u, v, w] = [[u, v], w])
    (u)        括弧
空文字列は単位元。
"""
import ply.lex as lex
import ply.yacc as yacc

from polyaut.errors import ParseError
from polyaut.metabelian import FMElement, fm_commutator, fm_generator, fm_identity, fm_inv, fm_mul, fm_pow

tokens = ('GEN', 'INT', 'CARET', 'TIMES', 'COMMA', 'LPAREN', 'RPAREN', 'LBRACKET', 'RBRACKET')

t_GEN = r'[abcABC]'
t_CARET = r'\^'
t_TIMES = r'\*'
t_COMMA = r','
t_LPAREN = r'\('
t_RPAREN = r'\)'
t_LBRACKET = r'\['
t_RBRACKET = r'\]'

t_ignore = ' \t'


def t_INT(t):
    r'-?\d+'
    t.value = int(t.value)
    return t


def t_error(t):
    raise ParseError(t.lexer.lexdata, t.lexpos, f"不正な文字 '{t.value[0]}'")


def p_word_product(p):
    """word : word factor
            | word TIMES factor"""
    p[0] = ('mul', p[1], p[len(p) - 1])


def p_word_factor(p):
    """word : factor"""
    p[0] = p[1]


def p_factor_power(p):
    """factor : atom CARET INT"""
    p[0] = ('pow', p[1], p[3])


def p_factor_atom(p):
    """factor : atom"""
    p[0] = p[1]


def p_atom_generator(p):
    """atom : GEN"""
    p[0] = ('gen', p[1])


def p_atom_group(p):
    """atom : LPAREN word RPAREN"""
    p[0] = p[2]


def p_atom_commutator(p):
    """atom : LBRACKET wordlist RBRACKET"""
    if len(p[2]) < 2:
        raise ParseError(p.lexer.lexdata, p.lexpos(1), "交換子には 2 つ以上の引数が必要です")
    p[0] = ('comm', tuple(p[2]))


def p_wordlist_more(p):
    """wordlist : wordlist COMMA word"""
    p[0] = p[1] + [p[3]]


def p_wordlist_one(p):
    """wordlist : word"""
    p[0] = [p[1]]


def p_error(t):
    if t is None:
        raise ParseError("", None, "入力が途中で終わっています")
    raise ParseError(t.lexer.lexdata, t.lexpos, f"予期しないトークン '{t.value}'")


_lexer = lex.lex(errorlog=lex.NullLogger())
_parser = yacc.yacc(debug=False, write_tables=False, errorlog=yacc.NullLogger())


def parse_tree(text: str):
    """構文木 (タプル) を返す。空文字列なら None"""
    if not text.strip():
        return None
    try:
        return _parser.parse(text, lexer=_lexer.clone())
    except ParseError as e:
        if not e.text:
            raise ParseError(text, len(text), e.detail) from None
        raise


def evaluate(tree, rank: int) -> FMElement:
    if tree is None:
        return fm_identity(rank)
    kind = tree[0]
    if kind == 'gen':
        letter = tree[1]
        index = ord(letter.lower()) - ord('a')
        if index >= rank:
            raise ParseError(letter, None, f"生成元 '{letter}' はランク {rank} にありません")
        g = fm_generator(rank, index)
        return fm_inv(g) if letter.isupper() else g
    if kind == 'mul':
        return fm_mul(evaluate(tree[1], rank), evaluate(tree[2], rank))
    if kind == 'pow':
        return fm_pow(evaluate(tree[1], rank), tree[2])
    if kind == 'comm':
        parts = [evaluate(sub, rank) for sub in tree[1]]
        return fm_commutator(*parts)
    raise ValueError(f"不明な構文木です: {tree!r}")


def parse_word(text: str, rank: int = 2) -> FMElement:
    """語を解析して自由メタアーベル群の元にする"""
    try:
        return evaluate(parse_tree(text), rank)
    except ParseError as e:
        if e.text != text:
            raise ParseError(text, e.position, e.detail) from None
        raise
