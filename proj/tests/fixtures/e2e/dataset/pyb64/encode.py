print(base64.b64encode(b"hi").decode())
