from arcradius import create_app

app = create_app()
