import ast
import re

_FENCE_OPEN = re.compile(r'^\s*(`{3,}|~{3,})\s*([\w+.-]*)\s*$')


def fenced_blocks(text):
    """Contents of every fenced block, in order; unterminated blocks run to the end."""
    blocks = []
    lines = text.splitlines(keepends=True)
    i = 0
    while i < len(lines):
        match = _FENCE_OPEN.match(lines[i])
        if not match:
            i += 1
            continue
        fence = match.group(1)
        body = []
        i += 1
        while i < len(lines) and lines[i].strip() != fence:
            body.append(lines[i])
            i += 1
        if body and not body[-1].endswith('\n'):
            body[-1] += '\n'
        blocks.append(''.join(body))
        i += 1
    return blocks


def _looks_like_code(text):
    try:
        tree = ast.parse(text)
    except (SyntaxError, ValueError):
        return False
    # a lone word or literal parses too; prose is not code
    return any(not (isinstance(stmt, ast.Expr) and isinstance(stmt.value, (ast.Name, ast.Constant)))
               for stmt in tree.body)


def extract_code(raw_response):
    if not raw_response or not raw_response.strip():
        return None

    blocks = fenced_blocks(raw_response)
    if blocks:
        longest = max(blocks, key=lambda b: len(b.splitlines()))
        return longest if longest.strip() else None

    if _looks_like_code(raw_response):
        return raw_response
    return None
