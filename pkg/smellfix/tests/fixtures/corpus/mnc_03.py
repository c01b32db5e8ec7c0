def table(rows):
    layout = {'rows': [[r] for r in rows]}
    return layout


EDGES = {((0, 1), (1, 2))}

payload = [dict(items=[[1, 2]])]
