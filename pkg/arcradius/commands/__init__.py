def register_blueprints(app):
    from .bounds import bp as bounds_bp
    from .dsharp import bp as dsharp_bp
    from .rho import bp as rho_bp
    from .search import bp as search_bp
    from .verify import bp as verify_bp

    app.register_blueprint(dsharp_bp)
    app.register_blueprint(rho_bp)
    app.register_blueprint(bounds_bp)
    app.register_blueprint(verify_bp)
    app.register_blueprint(search_bp)
