def wrap(text, width=70):
    words = text.split()
    lines = []
    current = []
    length = 0
    for word in words:
        extra = len(word) + (1 if current else 0)
        if length + extra > width and current:
            lines.append(" ".join(current))
            current = [word]
            length = len(word)
        else:
            current.append(word)
            length += extra
    if current:
        lines.append(" ".join(current))
    return lines


def indent(lines, prefix="    "):
    return [prefix + line if line.strip() else line for line in lines]


def dedent(lines):
    margins = [len(l) - len(l.lstrip()) for l in lines if l.strip()]
    if not margins:
        return list(lines)
    cut = min(margins)
    return [l[cut:] for l in lines]
