def load(session, user_id):
    query = session.query(User).filter(User.id == user_id).order_by(User.name).first()
    return query


def render(page):
    page.header.title.text.upper().strip()
