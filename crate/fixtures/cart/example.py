"""A tiny shopping cart.

Contains an injected fault on line 11: multi-quantity adds put one item too many in the cart.
"""
cart = []


def addToCart(product, quantity=1):
    if quantity == 1:
        return cart.append(product)
    cart.extend([product] * (quantity + 1))


def removeFromCart(product):
    if product in cart:
        cart.remove(product)


def printProductsInCart():
    for product in cart:
        print(product)


def getProductCount():
    return len(cart)
