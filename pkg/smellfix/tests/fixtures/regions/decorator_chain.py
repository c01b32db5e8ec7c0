import app


@app.router.routes.api.get('/items')
def list_items():
    return []
